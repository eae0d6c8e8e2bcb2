"""Tester-versus-adversary games and Monte Carlo experiments over them."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from .. import boolean_testers as bt
from .. import seq_testers as st
from ..adversaries import ADVERSARIES, make_adversary
from ..oracle import AdversarialOracle, OracleConfig, replay
from .generators import GENERATORS, Generated, generate
from .stats import wilson

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib


class ConfigError(ValueError):
    pass


def rational(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        return Fraction(str(v))
    return Fraction(v)


# ---- tester adapters -------------------------------------------------------------------

def _pattern(desc) -> bt.PatternMatrix:
    """'cube:<d>', 'chain:<d>,<s>', 'blr_square', or a list of row bit-strings."""
    if isinstance(desc, bt.PatternMatrix):
        return desc
    if isinstance(desc, (list, tuple)):
        return bt.PatternMatrix.from_bits([[int(c) for c in str(r)] for r in desc])
    kind, _, arg = str(desc).partition(":")
    if kind == "cube":
        return bt.affine_cube(int(arg))
    if kind == "chain":
        d, s = (int(v) for v in arg.split(","))
        return bt.chain_of_cubes(d, s)
    if kind == "blr_square":
        return bt.blr_square()
    raise ConfigError(f"unknown pattern {desc!r}")


def _override(p: bt.TesterParams, params: dict) -> bt.TesterParams:
    kw = {k: params[k] for k in ("m", "r") if k in params}
    return p.override(**kw) if kw else p


def _run_blr(oracle, rng, p):
    return bt.blr_k_test(oracle, int(p.get("k", 2)), rng)


def _run_linearity(oracle, rng, p):
    eps, t = rational(p["eps"]), rational(p.get("t", oracle.config.t))
    params = _override(bt.linearity_params(eps, t), p)
    return bt.online_linearity_test(oracle, eps, t, rng, params)


def _run_x(oracle, rng, p):
    return bt.x_tester(_pattern(p["pattern"]), oracle, rng)


def _run_degree(oracle, rng, p):
    eps, t, d = rational(p["eps"]), rational(p.get("t", oracle.config.t)), int(p["d"])
    params = _override(bt.degree_params(eps, d, t), p)
    return bt.online_degree_test(oracle, eps, d, t, rng, params)


def _run_subspace(oracle, rng, p):
    return bt.batch_subspace_degree_test(
        oracle, rational(p["eps"]), int(p["d"]), rational(p.get("t", oracle.config.t)),
        rational(p.get("zeta", Fraction(1, 10))), rng, p.get("iterations"))


def _prop(p) -> st.LocalPropertySpec:
    prop = p.get("property", "sortedness")
    if isinstance(prop, st.LocalPropertySpec):
        return prop
    try:
        return st.PROPERTIES[prop]
    except KeyError:
        raise ConfigError(f"unknown property {prop!r}") from None


def _run_pair(oracle, rng, p):
    return st.pair_tester(oracle, _prop(p), rational(p["eps"]), rng, p.get("iterations"))


def _run_hier(oracle, rng, p):
    return st.hierarchical_tester(oracle, _prop(p), rational(p["eps"]), rng, p.get("iterations"))


def _run_fixed_pair(oracle, rng, p):
    return st.fixed_rate_pair_tester(oracle, _prop(p), rational(p["eps"]),
                                     rational(p.get("t", oracle.config.t)), rng,
                                     p.get("iterations"))


# Probes: query-only strategies used to exercise adversaries. They always accept.

def _run_uniform_probe(oracle, rng, p):
    """q uniform single-point batches; stops early once the adversary reports
    that the rest of the game cannot change its outcome."""
    q = int(p.get("q", 100))
    lo, size = oracle.lo, oracle.size
    adv = oracle.adversary
    settled = getattr(adv, "settled", None) if p.get("stop_when_settled") else None
    for _ in range(q):
        oracle.query(lo + int(rng.integers(0, size)))
        if settled is not None and settled():
            break
    return bt._finish(oracle, None, 0)


def _run_structured_probe(oracle, rng, p):
    """Single-point queries concentrated on random low-dimensional affine
    subspaces of the cube, with occasional fresh uniform points."""
    q = int(p.get("q", 40))
    size = oracle.size
    dim_hi = int(p.get("max_dim", 5))
    V, shift = [], 0
    for j in range(q):
        if j % 12 == 0:
            V = rng.integers(1, size, size=int(rng.integers(1, dim_hi + 1))).tolist()
            shift = int(rng.integers(0, size)) if rng.random() < 0.5 else 0
        if rng.random() < 0.1:
            x = int(rng.integers(0, size))
        else:
            x = shift
            for v, keep in zip(V, rng.integers(0, 2, size=len(V)).tolist()):
                if keep:
                    x ^= v
        oracle.query(x)
    return bt._finish(oracle, None, 0)


def _run_pair_sweep(oracle, rng, p):
    """Queries the odd member 2i-1 of every pair once, left to right."""
    for x in range(1, oracle.n + 1, 2):
        oracle.query(x)
    return bt._finish(oracle, None, 0)


TESTER_RUNNERS: dict[str, Callable] = {
    "uniform_prober": _run_uniform_probe,
    "structured_prober": _run_structured_probe,
    "pair_sweep": _run_pair_sweep,
    "blr_k": _run_blr,
    "online_linearity": _run_linearity,
    "x_tester": _run_x,
    "online_degree": _run_degree,
    "batch_subspace": _run_subspace,
    "pair_tester": _run_pair,
    "hierarchical": _run_hier,
    "fixed_rate_pair": _run_fixed_pair,
}


# ---- configuration -------------------------------------------------------------------------

@dataclass
class ExperimentConfig:
    tester: str
    generator: str
    trials: int
    seed: int
    tester_params: dict = field(default_factory=dict)
    adversary: str = "identity"
    adversary_params: dict = field(default_factory=dict)
    generator_params: dict = field(default_factory=dict)
    t: Fraction = Fraction(0)
    b: int = 1
    scheduling: str = "fixed-rate"
    kind: str = "erasure"
    pre_game_manipulation: bool = False
    fresh_input: bool = False  # draw a new input every trial
    audit_rate: float = 0.01
    out: str | None = None

    def __post_init__(self):
        self.t = rational(self.t)
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.tester not in TESTER_RUNNERS:
            raise ConfigError(f"unknown tester {self.tester!r}")
        if self.adversary not in ADVERSARIES:
            raise ConfigError(f"unknown adversary {self.adversary!r}")
        if self.generator not in GENERATORS:
            raise ConfigError(f"unknown generator {self.generator!r}")
        if not 0 <= self.audit_rate <= 1:
            raise ConfigError("audit_rate must lie in [0, 1]")

    @property
    def oracle_config(self) -> OracleConfig:
        return OracleConfig(self.t, self.b, self.scheduling, self.kind, self.pre_game_manipulation)

    def echo(self) -> dict:
        def plain(v):
            if isinstance(v, Fraction):
                return str(v)
            if isinstance(v, dict):
                return {k: plain(x) for k, x in sorted(v.items())}
            if isinstance(v, (list, tuple)):
                return [plain(x) for x in v]
            return v
        return {k: plain(v) for k, v in asdict(self).items()}


def _coerce(v):
    if isinstance(v, str) and "/" in v:
        try:
            return Fraction(v)
        except ValueError:
            return v
    if isinstance(v, dict):
        return {k: _coerce(x) for k, x in v.items()}
    return v


def config_from_mapping(data: dict, seed: int | None = None, trials: int | None = None) -> ExperimentConfig:
    """Build a config from the TOML layout: [experiment], [oracle], [tester],
    [adversary] and [generator] tables; each named table carries ``name``."""
    data = _coerce(data)
    exp = dict(data.get("experiment", {}))
    orc = dict(data.get("oracle", {}))
    tester = dict(data.get("tester", {}))
    adv = dict(data.get("adversary", {"name": "identity"}))
    gen = dict(data.get("generator", {}))
    try:
        tester_name = tester.pop("name")
        gen_name = gen.pop("name")
    except KeyError as exc:
        raise ConfigError(f"missing name in [{exc.args[0]}] table") from None
    if seed is None:
        seed = exp.get("seed")
    if seed is None:
        env = os.environ.get("OLT_SEED")
        seed = int(env) if env else None
    if seed is None:
        raise ConfigError("no seed: set experiment.seed, --seed or OLT_SEED")
    return ExperimentConfig(
        tester=tester_name,
        generator=gen_name,
        trials=int(trials if trials is not None else exp.get("trials", 0)),
        seed=int(seed),
        tester_params=tester,
        adversary=adv.pop("name", "identity"),
        adversary_params=adv,
        generator_params=gen,
        t=orc.get("t", 0),
        b=int(orc.get("b", 1)),
        scheduling=orc.get("scheduling", "fixed-rate"),
        kind=orc.get("kind", "erasure"),
        pre_game_manipulation=bool(orc.get("pre_game_manipulation", False)),
        fresh_input=bool(exp.get("fresh_input", False)),
        audit_rate=float(exp.get("audit_rate", 0.01)),
        out=exp.get("out"),
    )


def load_config(path: str, seed: int | None = None, trials: int | None = None) -> ExperimentConfig:
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    return config_from_mapping(data, seed, trials)


# ---- games ---------------------------------------------------------------------------------

def trial_seeds(seed: int, trial: int) -> tuple:
    """(input, tester, adversary) seed sequences for one trial; a pure function of
    (seed, trial), so trial order and worker layout cannot change results."""
    return tuple(np.random.SeedSequence(seed, spawn_key=(trial,)).spawn(3))


def shared_input_seed(seed: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(2 ** 32,))


def audit_sample(cfg: ExperimentConfig) -> set:
    if cfg.audit_rate <= 0:
        return set()
    k = min(cfg.trials, max(1, math.ceil(cfg.audit_rate * cfg.trials)))
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(2 ** 32 + 1,)))
    return set(rng.choice(cfg.trials, size=k, replace=False).tolist())


@dataclass
class GameResult:
    trial: int
    rejected: bool
    saw_manipulation: bool
    queries: int
    distance: Fraction | None
    witness_ok: bool
    audit: bool | None = None  # None when not audited
    metrics: dict = field(default_factory=dict)
    transcript: str | None = None


def witness_consistent(base, witness) -> bool:
    """Whether a rejecting witness reads the pristine input exactly."""
    if witness is None:
        return True
    lo = base.oracle_domain()[1]
    vals = base.oracle_values()
    return all(a is not None and a == vals[x - lo] for x, a in witness)


def play_game(cfg: ExperimentConfig, trial: int, gen: Generated | None = None,
              record: bool = False, keep_transcript: bool = False) -> GameResult:
    in_ss, test_ss, adv_ss = trial_seeds(cfg.seed, trial)
    if gen is None:
        gen = generate(cfg.generator, np.random.default_rng(in_ss), **cfg.generator_params)
    base = gen.input
    adv = make_adversary(cfg.adversary, np.random.default_rng(adv_ss), **cfg.adversary_params)
    oracle = AdversarialOracle(base, cfg.oracle_config, adv, seed=f"{cfg.seed}:{trial}", record=record)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", bt.RegimeWarning)
        verdict = TESTER_RUNNERS[cfg.tester](oracle, np.random.default_rng(test_ss), cfg.tester_params)
    text = oracle.dump_transcript() if record else None
    audit = bool(replay(text, base)) if record else None
    metrics = adv.metrics() if hasattr(adv, "metrics") else {}
    return GameResult(
        trial, verdict.rejected, verdict.saw_manipulation, verdict.queries, gen.distance,
        witness_consistent(base, verdict.rejecting_witness), audit, metrics,
        text if keep_transcript else None,
    )


def _play_chunk(args) -> list[GameResult]:
    cfg, trials, audited = args
    gen = None if cfg.fresh_input else generate(
        cfg.generator, np.random.default_rng(shared_input_seed(cfg.seed)), **cfg.generator_params)
    return [play_game(cfg, i, gen, record=i in audited) for i in trials]


# ---- reports -------------------------------------------------------------------------------

@dataclass
class ExperimentReport:
    config: dict
    trials: int
    accepts: int
    rejects: int
    saw_manipulation: int
    reject_ci: tuple
    accept_ci: tuple
    saw_manipulation_ci: tuple
    mean_queries: float
    distance_min: str | None
    distance_max: str | None
    witness_violations: int
    audited: int
    audit_failures: int
    metrics: dict = field(default_factory=dict)
    wall_clock: float = 0.0

    @property
    def reject_rate(self) -> float:
        return self.rejects / self.trials

    @property
    def saw_rate(self) -> float:
        return self.saw_manipulation / self.trials

    def as_dict(self, timing: bool = False) -> dict:
        d = asdict(self)
        d["reject_ci"] = list(self.reject_ci)
        d["accept_ci"] = list(self.accept_ci)
        d["saw_manipulation_ci"] = list(self.saw_manipulation_ci)
        if not timing:
            d.pop("wall_clock")
        return d

    def to_jsonl(self, timing: bool = False) -> str:
        """One canonical JSON line; byte-identical for identical config and seed
        unless ``timing`` adds the wall-clock field."""
        return json.dumps(self.as_dict(timing), sort_keys=True, separators=(",", ":")) + "\n"

    CSV_FIELDS = ("tester", "adversary", "generator", "seed", "trials", "accepts", "rejects",
                  "saw_manipulation", "reject_lo", "reject_hi", "saw_lo", "saw_hi",
                  "mean_queries", "distance_min", "audited", "audit_failures")

    def csv_row(self) -> dict:
        c = self.config
        return {
            "tester": c["tester"], "adversary": c["adversary"], "generator": c["generator"],
            "seed": c["seed"], "trials": self.trials, "accepts": self.accepts,
            "rejects": self.rejects, "saw_manipulation": self.saw_manipulation,
            "reject_lo": f"{self.reject_ci[0]:.6f}", "reject_hi": f"{self.reject_ci[1]:.6f}",
            "saw_lo": f"{self.saw_manipulation_ci[0]:.6f}",
            "saw_hi": f"{self.saw_manipulation_ci[1]:.6f}",
            "mean_queries": f"{self.mean_queries:.3f}", "distance_min": self.distance_min,
            "audited": self.audited, "audit_failures": self.audit_failures,
        }


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=ExperimentReport.CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        w.writerow(r.csv_row())
    return buf.getvalue()


def aggregate(cfg: ExperimentConfig, games: list[GameResult], wall: float = 0.0) -> ExperimentReport:
    games = sorted(games, key=lambda g: g.trial)
    n = len(games)
    rej = sum(g.rejected for g in games)
    saw = sum(g.saw_manipulation for g in games)
    dists = [g.distance for g in games if g.distance is not None]
    metrics: dict = {}
    for g in games:
        for k, v in g.metrics.items():
            metrics[k] = metrics.get(k, 0) + v
    audited = [g for g in games if g.audit is not None]
    return ExperimentReport(
        config=cfg.echo(),
        trials=n,
        accepts=n - rej,
        rejects=rej,
        saw_manipulation=saw,
        reject_ci=wilson(rej, n),
        accept_ci=wilson(n - rej, n),
        saw_manipulation_ci=wilson(saw, n),
        mean_queries=sum(g.queries for g in games) / n,
        distance_min=str(min(dists)) if dists else None,
        distance_max=str(max(dists)) if dists else None,
        witness_violations=sum(not g.witness_ok for g in games),
        audited=len(audited),
        audit_failures=sum(not g.audit for g in audited),
        metrics=metrics,
        wall_clock=wall,
    )


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> ExperimentReport:
    """Play cfg.trials independent games and aggregate. Results do not depend
    on ``workers``: each trial's randomness is derived from (seed, trial)."""
    start = time.perf_counter()
    audited = audit_sample(cfg)
    order = list(range(cfg.trials))
    if workers <= 1 or cfg.trials < 2 * workers:
        games = _play_chunk((cfg, order, audited))
    else:
        chunks = [order[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            games = [g for part in ex.map(_play_chunk, [(cfg, c, audited) for c in chunks]) for g in part]
    return aggregate(cfg, games, time.perf_counter() - start)


def write_reports(reports, path: str | None, fmt: str = "jsonl") -> str:
    text = reports_to_csv(reports) if fmt == "csv" else "".join(r.to_jsonl() for r in reports)
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text


__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "ExperimentReport",
    "GameResult",
    "TESTER_RUNNERS",
    "config_from_mapping",
    "load_config",
    "play_game",
    "run_experiment",
    "aggregate",
    "trial_seeds",
    "audit_sample",
    "witness_consistent",
    "reports_to_csv",
    "write_reports",
]
