import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from loewy.arith import qadic_expand  # noqa: E402


def exact_exponent_vector(q: int, n: int, z: int, k: int) -> list[int]:
    """Reference expansion of k*e computed with full-width integers."""
    e = (q**n - 1) // z
    digits = qadic_expand(k * e, q)
    return digits + [0] * (n - len(digits))
