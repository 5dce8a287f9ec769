"""Synthetic schema/rule generator and the scalability timing harness.

Randomness comes from :class:`random.Random` (Mersenne Twister) seeded with
``GenParams.seed``; the same parameters always produce the same schema and
rules.
"""

from __future__ import annotations

import csv
import math
import multiprocessing as mp
import random
import statistics
import time
from dataclasses import asdict, dataclass, replace

from .consequence import METHODS, schema_closure
from .rdf import TriplePattern, lit, uri, var
from .rules import Rule, RuleSet
from .schema import TriplestoreSchema

CSV_HEADER = ["method", "ns", "np", "nu", "nl", "nr", "na", "pic", "seed",
              "elapsed_ms", "timed_out", "output_size"]


@dataclass(frozen=True)
class GenParams:
    pi_c: float = 0.1
    n_p: int = 15
    n_u: int = 10
    n_l: int = 10
    n_s: int = 10
    n_r: int = 4
    n_a: int = 2
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.pi_c <= 1.0:
            raise ValueError(f"pi_c must be a probability, got {self.pi_c}")
        for name in ("n_p", "n_u", "n_l", "n_s", "n_r", "n_a"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")

    @classmethod
    def fig1(cls, n_s: int, seed: int = 0) -> GenParams:
        """Schema-size sweep cell: |P| = 1.5|S|, |U| = |L| = |S|, 4 rules of 2 triples."""
        return cls(pi_c=0.1, n_p=math.ceil(1.5 * n_s), n_u=n_s, n_l=n_s, n_s=n_s, n_r=4, n_a=2, seed=seed)

    @classmethod
    def fig2(cls, n_r: int, n_a: int, seed: int = 0) -> GenParams:
        """Rule-count sweep cell: |S| = 50, |P| = 60, |U| = |L| = 50."""
        return cls(pi_c=0.1, n_p=60, n_u=50, n_l=50, n_s=50, n_r=n_r, n_a=n_a, seed=seed)


def _pools(p: GenParams):
    preds = [uri(f":m{i}") for i in range(p.n_p)]
    uris = [uri(f":u{i}") for i in range(p.n_u)]
    lits = [lit(f"l{i}") for i in range(p.n_l)]
    return preds, uris, lits


def generate(p: GenParams) -> tuple[TriplestoreSchema, RuleSet]:
    """A random schema and set of chain rules.

    Each rule's antecedent is a chain ``?v0 p ?v1 . ?v1 p' ?v2 ...`` and its
    consequent links the chain's first subject to its last object. Half of
    the schema copies antecedent triples of the rules (with fresh variables)
    so that some rules apply; the rest are random patterns whose subject and
    object are constants with probability ``pi_c``.
    """
    rng = random.Random(p.seed)
    preds, uris, lits = _pools(p)

    rules = []
    for k in range(p.n_r):
        chain = [var(f"v{i}") for i in range(p.n_a + 1)]
        ante = [TriplePattern(chain[i], rng.choice(preds), chain[i + 1]) for i in range(p.n_a)]
        cons = [TriplePattern(chain[0], rng.choice(preds), chain[-1])]
        rules.append(Rule(f"r{k}", ante, cons))

    counter = iter(range(10 ** 9))

    def fresh():
        return var(f"s{next(counter)}")

    pool = [tp for r in rules for tp in r.antecedent]
    patterns = []
    for _ in range(p.n_s // 2):
        tp = rng.choice(pool)
        patterns.append(TriplePattern(*(fresh() if t.is_var else t for t in tp)))
    for _ in range(p.n_s - p.n_s // 2):
        s = rng.choice(uris) if rng.random() < p.pi_c else fresh()
        pred = rng.choice(preds)
        if rng.random() < p.pi_c:
            o = rng.choice(uris) if rng.random() < 0.5 else rng.choice(lits)
        else:
            o = fresh()
        patterns.append(TriplePattern(s, pred, o))

    nolit = {t for tp in patterns for t in tp[:2] if t.is_var}
    return TriplestoreSchema(patterns, nolit, strict=True), RuleSet(tuple(rules))


@dataclass(frozen=True)
class BenchRow:
    params: GenParams
    method: str
    elapsed_ms: float
    timed_out: bool
    output_size: float

    def csv_row(self) -> list:
        p = self.params
        return [self.method, p.n_s, p.n_p, p.n_u, p.n_l, p.n_r, p.n_a, p.pi_c, p.seed,
                f"{self.elapsed_ms:.3f}", int(self.timed_out), f"{self.output_size:g}"]


def time_closure(params: GenParams, method: str, ucq: str = "wildcard") -> tuple[float, int]:
    """Milliseconds to close one generated case, and the output schema size."""
    S, R = generate(params)
    t0 = time.perf_counter()
    rep = schema_closure(S, R, method, ucq=ucq)
    elapsed = (time.perf_counter() - t0) * 1000.0
    return elapsed, len(rep.output)


def _child(conn, params, method, ucq):
    try:
        conn.send(("ok", time_closure(params, method, ucq)))
    except BaseException as e:  # reported to the parent, never raised there
        conn.send(("error", repr(e)))
    finally:
        conn.close()


def run_once(params: GenParams, method: str, timeout: float | None = None, ucq: str = "wildcard"):
    """Time one closure; returns (elapsed_ms, output_size) or None on timeout.

    With a timeout the closure runs in a forked process that is killed when
    the budget runs out.
    """
    if timeout is None:
        return time_closure(params, method, ucq)
    ctx = mp.get_context("fork")
    recv, send = ctx.Pipe(duplex=False)
    proc = ctx.Process(target=_child, args=(send, params, method, ucq), daemon=True)
    proc.start()
    send.close()
    try:
        if not recv.poll(timeout):
            return None
        status, payload = recv.recv()
    finally:
        if proc.is_alive():
            proc.kill()
        proc.join()
        recv.close()
    if status != "ok":
        raise RuntimeError(f"benchmark run failed: {payload}")
    return payload


def run_bench(grid, methods=METHODS, repetitions: int = 1, timeout: float | None = 600.0,
              progress=None, ucq: str = "wildcard") -> list[BenchRow]:
    """Time every method on every grid cell, one aggregated row per (cell, method).

    Repetition ``k`` of a cell uses seed ``cell.seed + k``. ``elapsed_ms`` is
    the mean over repetitions. Once a method times out on a cell, the rest of
    the grid is not run for that method; those cells are reported as timed
    out with the budget as their time.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be at least 1")
    budget_ms = None if timeout is None else timeout * 1000.0
    dead = set()
    rows = []
    for cell in grid:
        for method in methods:
            if method in dead:
                rows.append(BenchRow(cell, method, budget_ms, True, 0))
                continue
            times, sizes, timed_out = [], [], False
            for k in range(repetitions):
                res = run_once(replace(cell, seed=cell.seed + k), method, timeout, ucq)
                if res is None:
                    timed_out = True
                    break
                times.append(res[0])
                sizes.append(res[1])
            if timed_out:
                dead.add(method)
                row = BenchRow(cell, method, budget_ms, True, statistics.mean(sizes) if sizes else 0)
            else:
                row = BenchRow(cell, method, statistics.mean(times), False, statistics.mean(sizes))
            rows.append(row)
            if progress is not None:
                progress(row)
    return rows


def write_csv(rows, fh) -> None:
    w = csv.writer(fh)
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow(row.csv_row())


def read_grid(data) -> list[GenParams]:
    """Grid cells from a list of dicts keyed like the CSV header or the GenParams fields."""
    aliases = {"pic": "pi_c", "np": "n_p", "nu": "n_u", "nl": "n_l", "ns": "n_s", "nr": "n_r", "na": "n_a"}
    cells = []
    for item in data:
        kw = {aliases.get(k, k): v for k, v in item.items()}
        cells.append(GenParams(**kw))
    return cells


def params_dict(p: GenParams) -> dict:
    return asdict(p)
