"""Enumeration of the equivalence classes A[q, n, z]: one representative per
cyclic subgroup of (Z/z)^x, with computed profiles, JSONL persistence, and
aggregate statistics.

Records are emitted in a deterministic order (z ascending, then subgroup
order, then representative), scans are resumable by extending a prefix, and
rescans of the same range are byte-identical.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import gcd

from .algebra import Algebra, same_table
from .arith import mult_order
from .errors import CapacityError, DomainError
from .invariants import invariant_report, report_difference

SCHEMA_VERSION = 1

_FIELDS = ("schema", "z", "q", "n", "subgroup", "e", "m", "ll", "bound",
           "gap", "loewy_vector", "flags", "runtime_ms")

# Reference values for the full z <= 10000 run: a long-running target, kept
# for documentation and for the long-running mode, never asserted in CI.
# Two published totals for the class count differ by one; both are recorded.
FULL_SCALE_REFERENCE = {
    "not_desk_verifiable": True,
    "z_range": [1, 10000],
    "parameter_pairs": 768512,
    "equivalence_classes_alt_count": 768511,
    "distinct_loewy_vectors": 475581,
    "ll_three": 191608,
    "spike_vectors": 37400,
    "bound_not_attained": 10721,
}


@dataclass(frozen=True)
class EquivKey:
    """One equivalence class: (z, cyclic subgroup of units mod z), carried
    by its smallest generator (z + 1 stands in for the trivial subgroup)."""

    z: int
    subgroup: tuple[int, ...]
    q_rep: int

    @property
    def order(self) -> int:
        return len(self.subgroup)


@dataclass(frozen=True)
class DbRecord:
    key: EquivKey
    n: int
    e_decimal: str
    m: int
    ll: int
    bound: int
    gap: int
    loewy_vector: tuple[int, ...]
    flags: dict
    runtime_ms: int = 0

    def to_json_line(self) -> str:
        payload = {
            "schema": SCHEMA_VERSION,
            "z": self.key.z,
            "q": self.key.q_rep,
            "n": self.n,
            "subgroup": list(self.key.subgroup),
            "e": self.e_decimal,
            "m": self.m,
            "ll": self.ll,
            "bound": self.bound,
            "gap": self.gap,
            "loewy_vector": list(self.loewy_vector),
            "flags": self.flags,
            "runtime_ms": self.runtime_ms,
        }
        return json.dumps(payload, separators=(",", ":"))

    @staticmethod
    def from_json_line(line: str):
        data = json.loads(line)
        key = EquivKey(z=data["z"], subgroup=tuple(data["subgroup"]),
                       q_rep=data["q"])
        if "error" in data:
            return ErrorRecord(key=key, error=data["error"])
        if tuple(data.keys()) != _FIELDS:
            raise DomainError(f"unexpected record fields: {tuple(data.keys())}")
        return DbRecord(
            key=key, n=data["n"], e_decimal=data["e"], m=data["m"],
            ll=data["ll"], bound=data["bound"], gap=data["gap"],
            loewy_vector=tuple(data["loewy_vector"]), flags=data["flags"],
            runtime_ms=data["runtime_ms"],
        )

    def to_csv_row(self) -> str:
        vec = self.loewy_vector[:32]
        return ",".join([
            str(self.key.z), str(self.key.q_rep), str(self.n),
            self.e_decimal, str(self.m), str(self.ll), str(self.bound),
            str(self.gap),
            *(str(int(self.flags[name])) for name in
              ("uniserial", "bound_attained", "ll_three", "spike_vector")),
            ";".join(str(c) for c in vec),
        ])


@dataclass(frozen=True)
class ErrorRecord:
    """A per-record capacity failure, kept in the stream instead of being
    dropped; the scan stays complete and resumable."""

    key: EquivKey
    error: str

    def to_json_line(self) -> str:
        payload = {
            "schema": SCHEMA_VERSION,
            "z": self.key.z,
            "q": self.key.q_rep,
            "subgroup": list(self.key.subgroup),
            "error": self.error,
        }
        return json.dumps(payload, separators=(",", ":"))


CSV_HEADER = ("z,q,n,e,m,ll,bound,gap,uniserial,bound_attained,ll_three,"
              "spike_vector,loewy_vector")


def subgroup_representatives(z: int) -> list[EquivKey]:
    """One key per cyclic subgroup of (Z/z)^x, sorted by (order, smallest
    generator); q = 1 is replaced by q = z + 1."""
    if z < 1:
        raise DomainError(f"z must be >= 1, got {z}")
    if z == 1:
        return [EquivKey(z=1, subgroup=(1,), q_rep=2)]
    groups: dict[frozenset, int] = {}
    for a in range(1, z):
        if gcd(a, z) != 1:
            continue
        sub = frozenset(pow(a, i, z) for i in range(1, mult_order(a, z) + 1))
        if sub not in groups or a < groups[sub]:
            groups[sub] = a
    keys = []
    for sub, gen in groups.items():
        q_rep = z + 1 if gen == 1 else gen
        keys.append(EquivKey(z=z, subgroup=tuple(sorted(sub)), q_rep=q_rep))
    keys.sort(key=lambda k: (k.order, k.q_rep))
    return keys


def compute_record(key: EquivKey) -> DbRecord:
    n = 1 if key.z == 1 else mult_order(key.q_rep % key.z, key.z)
    alg = Algebra(key.q_rep, n, key.z)
    report = alg.bound_report()
    return DbRecord(
        key=key,
        n=n,
        e_decimal=str(alg.e()),
        m=report.m,
        ll=report.ll,
        bound=report.bound,
        gap=report.gap,
        loewy_vector=alg.loewy_vector(),
        flags=alg.flags(),
        runtime_ms=0,  # kept deterministic so rescans are byte-identical
    )


def scan_keys(z_min: int, z_max: int) -> list[EquivKey]:
    if z_min < 1 or z_max < z_min:
        raise DomainError(f"invalid range [{z_min}, {z_max}]")
    keys = []
    for z in range(z_min, z_max + 1):
        keys.extend(subgroup_representatives(z))
    return keys


def compute_or_error(key: EquivKey):
    """Capacity failures become error rows in the stream, never silent
    drops; anything else propagates (it is a bug)."""
    try:
        return compute_record(key)
    except CapacityError as exc:
        return ErrorRecord(key=key, error=str(exc))


def scan_records(z_min: int, z_max: int, *, jobs: int = 1, skip: int = 0):
    """Yield records for the range in deterministic order; with jobs > 1 a
    worker pool computes out of order and the pool's mapper restores the
    order."""
    keys = scan_keys(z_min, z_max)[skip:]
    if jobs <= 1:
        for key in keys:
            yield compute_or_error(key)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(compute_or_error, keys, chunksize=8)


def scan_to_file(z_min: int, z_max: int, out_path: str, *, jobs: int = 1) -> int:
    """Write (or extend) a JSONL scan; an existing file must be a prefix of
    the deterministic key order and is never recomputed.  Returns the number
    of records appended."""
    keys = scan_keys(z_min, z_max)
    done = 0
    try:
        with open(out_path, "r", encoding="utf-8") as handle:
            for line, key in zip(handle, keys):
                rec = DbRecord.from_json_line(line)
                if rec.key != key:
                    raise DomainError(
                        f"existing output is not a prefix of this scan "
                        f"(record {done}: z={rec.key.z} q={rec.key.q_rep})"
                    )
                done += 1
    except FileNotFoundError:
        pass
    appended = 0
    with open(out_path, "a", encoding="utf-8") as handle:
        for record in scan_records(z_min, z_max, jobs=jobs, skip=done):
            handle.write(record.to_json_line() + "\n")
            appended += 1
    return appended


def load_records(path: str) -> list[DbRecord]:
    records = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                records.append(DbRecord.from_json_line(line))
    return records


def write_csv(records, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(CSV_HEADER + "\n")
        for record in records:
            if isinstance(record, DbRecord):
                handle.write(record.to_csv_row() + "\n")


def check_complete(records) -> None:
    """Verify the records cover every key of their z-range; refuse with the
    missing keys otherwise."""
    if not records:
        return
    by_key = {(rec.key.z, rec.key.q_rep) for rec in records}
    z_min = min(rec.key.z for rec in records)
    z_max = max(rec.key.z for rec in records)
    missing = []
    for key in scan_keys(z_min, z_max):
        if (key.z, key.q_rep) not in by_key:
            missing.append((key.z, key.q_rep))
    if missing:
        head = ", ".join(f"(z={z}, q={q})" for z, q in missing[:8])
        raise DomainError(
            f"incomplete scan for z in [{z_min}, {z_max}]: {len(missing)} "
            f"missing keys, first: {head}"
        )


def stats(records) -> dict:
    """Aggregate counts for a complete scan range; error rows are counted
    separately and excluded from the aggregates."""
    check_complete(records)
    error_rows = sum(1 for rec in records if isinstance(rec, ErrorRecord))
    records = [rec for rec in records if isinstance(rec, DbRecord)]
    vectors = set()
    ll3 = spike = gap_pos = gap_gt1 = 0
    gap_hist: dict[int, int] = {}
    smallest_gap_record = None
    for rec in records:
        vectors.add(rec.loewy_vector)
        if rec.ll == 3:
            ll3 += 1
        if rec.flags.get("spike_vector"):
            spike += 1
        if rec.gap > 0:
            gap_pos += 1
            if smallest_gap_record is None or rec.key.z < smallest_gap_record.key.z:
                smallest_gap_record = rec
        if rec.gap > 1:
            gap_gt1 += 1
        gap_hist[rec.gap] = gap_hist.get(rec.gap, 0) + 1
    out = {
        "parameter_pairs": len(records),
        "distinct_loewy_vectors": len(vectors),
        "ll_three": ll3,
        "spike_vectors": spike,
        "gap_positive": gap_pos,
        "gap_above_one": gap_gt1,
        "gap_histogram": dict(sorted(gap_hist.items())),
        "error_rows": error_rows,
    }
    if records:
        out["z_range"] = [min(r.key.z for r in records), max(r.key.z for r in records)]
    if smallest_gap_record is not None:
        out["smallest_dimension_with_gap"] = {
            "z": smallest_gap_record.key.z,
            "q": smallest_gap_record.key.q_rep,
            "n": smallest_gap_record.n,
            "gap": smallest_gap_record.gap,
        }
    return out


def isomorphism_screen(records, z: int) -> list[dict]:
    """Partition the records at a fixed z by Loewy vector, then inside each
    group merge by identical multiplication tables and separate survivors by
    their invariant reports."""
    at_z = [rec for rec in records
            if rec.key.z == z and isinstance(rec, DbRecord)]
    expected = {key.q_rep for key in subgroup_representatives(z)}
    if {rec.key.q_rep for rec in at_z} != expected:
        raise DomainError(f"records for z={z} are incomplete")
    groups: dict[tuple, list[DbRecord]] = {}
    for rec in at_z:
        groups.setdefault(rec.loewy_vector, []).append(rec)
    out = []
    for vector, members in sorted(groups.items()):
        entry = {"loewy_vector": list(vector), "members": [], "classes": []}
        entry["members"] = [[rec.key.q_rep, rec.n] for rec in members]
        if len(members) == 1:
            entry["classes"].append({
                "members": entry["members"],
                "status": "singleton",
            })
            out.append(entry)
            continue
        algebras = {rec.key.q_rep: Algebra(rec.key.q_rep, rec.n, z)
                    for rec in members}
        # union by identical tables
        classes: list[list[DbRecord]] = []
        for rec in members:
            for cls in classes:
                if same_table(algebras[cls[0].key.q_rep], algebras[rec.key.q_rep]):
                    cls.append(rec)
                    break
            else:
                classes.append([rec])
        if len(classes) == 1:
            entry["classes"].append({
                "members": entry["members"],
                "status": "isomorphic-by-basis-map",
            })
            out.append(entry)
            continue
        reports = {cls[0].key.q_rep: invariant_report(algebras[cls[0].key.q_rep])
                   for cls in classes}
        for i, cls in enumerate(classes):
            labels = []
            twins = []
            for j, other in enumerate(classes):
                if i == j:
                    continue
                diff = report_difference(reports[cls[0].key.q_rep],
                                         reports[other[0].key.q_rep])
                if diff is None:
                    twins.append(other[0].key.q_rep)
                else:
                    labels.append(diff)
            record = {"members": [[rec.key.q_rep, rec.n] for rec in cls]}
            if twins:
                # identical reports elsewhere: isomorphism stays undecided
                record["status"] = "unresolved"
                record["unresolved_against"] = twins
            else:
                record["status"] = "distinguished-by"
                record["distinguished_by"] = sorted(set(labels))
            entry["classes"].append(record)
        out.append(entry)
    return out
