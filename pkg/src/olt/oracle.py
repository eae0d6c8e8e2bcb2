"""Adversarial oracle: answers batches of queries, lets an adversary manipulate the
input between batches under a rate budget, and records a replayable transcript."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

ERASED = None  # the erasure symbol; never a legal input value

FIXED_RATE = "fixed-rate"
BUDGET_MANAGING = "budget-managing"
ERASURE = "erasure"
CORRUPTION = "corruption"

_MISSING = object()


class OracleError(Exception):
    pass


class BatchTooLarge(OracleError):
    pass


class OutOfDomain(OracleError):
    pass


class WrongKind(OracleError):
    pass


class WindowClosed(OracleError):
    pass


class MalformedTranscript(OracleError):
    pass


def as_rational(t) -> Fraction:
    if isinstance(t, Fraction):
        return t
    if isinstance(t, float):
        return Fraction(str(t))
    return Fraction(t)


def allotment(i: int, t) -> int:
    """Manipulations allowed after batch i under fixed-rate t: floor((i+1)t) - floor(it)."""
    t = as_rational(t)
    return ((i + 1) * t.numerator) // t.denominator - (i * t.numerator) // t.denominator


def cumulative_cap(i: int, t) -> int:
    """Largest integer total allowed after i batches under budget-managing t."""
    t = as_rational(t)
    return (i * t.numerator) // t.denominator


@dataclass(frozen=True)
class OracleConfig:
    t: Fraction = Fraction(0)
    b: int = 1
    scheduling: str = FIXED_RATE
    kind: str = ERASURE
    pre_game_manipulation: bool = False

    def __post_init__(self):
        object.__setattr__(self, "t", as_rational(self.t))
        if self.t < 0:
            raise ValueError("t must be non-negative")
        if self.b < 1:
            raise ValueError("b must be at least 1")
        if self.scheduling not in (FIXED_RATE, BUDGET_MANAGING):
            raise ValueError(f"unknown scheduling {self.scheduling!r}")
        if self.kind not in (ERASURE, CORRUPTION):
            raise ValueError(f"unknown manipulation kind {self.kind!r}")

    def header_fields(self) -> dict:
        return {
            "t": str(self.t),
            "b": str(self.b),
            "scheduling": self.scheduling,
            "kind": self.kind,
            "pre_game": "1" if self.pre_game_manipulation else "0",
        }


class Manipulation(NamedTuple):
    kind: str
    point: int
    value: object = None


def erase(x: int) -> Manipulation:
    return Manipulation(ERASURE, x)


def corrupt(x: int, value) -> Manipulation:
    return Manipulation(CORRUPTION, x, value)


class OracleView:
    """What an adversary may look at. The pristine input is only reachable by
    strategies that declare themselves input-aware."""

    __slots__ = ("_o",)

    def __init__(self, oracle: "AdversarialOracle"):
        self._o = oracle

    @property
    def clock(self) -> int:
        return self._o.clock

    @property
    def config(self) -> OracleConfig:
        return self._o.config

    @property
    def domain_kind(self) -> str:
        return self._o.domain_kind

    @property
    def lo(self) -> int:
        return self._o.lo

    @property
    def size(self) -> int:
        return self._o.size

    @property
    def n(self) -> int:
        return self._o.n

    @property
    def transcript(self) -> list:
        return self._o.transcript

    def budget(self) -> int:
        return self._o.budget()

    def is_erased(self, x: int) -> bool:
        return x in self._o.erased

    def was_queried(self, x: int) -> bool:
        return x in self._o._first

    @property
    def base(self):
        adv = self._o.adversary
        if adv is None or not getattr(adv, "input_aware", False):
            raise PermissionError("input-oblivious strategies cannot read the input")
        return self._o.base


class AdversarialOracle:
    """One game's oracle state.

    ``base`` is a BooleanFunctionTable (points 0..2^n-1) or a RealSequence
    (positions 1..n). Repeated queries return the first recorded answer.
    """

    def __init__(self, base, config: OracleConfig | None = None, adversary=None,
                 seed=None, record: bool = True):
        self.base = base
        self.config = config or OracleConfig()
        self.domain_kind, self.lo, self.size = base.oracle_domain()
        self.n = base.n
        self._values = base.oracle_values()
        self._hi = self.lo + self.size
        self.clock = 0
        self.erased: set = set()
        self.corrupted: dict = {}
        self.spent = 0
        self._window_spent = 0
        self._window_open = self.config.pre_game_manipulation
        self._first: dict = {}
        self.transcript: list = []
        self.record = record
        self.queries = 0
        self.manipulation_seen = False
        self.seed = seed
        self.adversary = adversary
        if adversary is not None:
            kinds = getattr(adversary, "kinds", (ERASURE,))
            if self.config.kind not in kinds:
                raise WrongKind(f"{type(adversary).__name__} does not issue {self.config.kind}s")
            adversary.bind(OracleView(self))
            if self.config.pre_game_manipulation:
                reqs = adversary.before_game(self.budget())
                if reqs:
                    self.apply_manipulations(reqs)

    # -- budget ---------------------------------------------------------------------
    def budget(self) -> int:
        """Manipulations still allowed in the current window."""
        if not self._window_open:
            return 0
        cfg = self.config
        if cfg.scheduling == FIXED_RATE:
            return allotment(self.clock, cfg.t) - self._window_spent
        return cumulative_cap(self.clock, cfg.t) - self.spent

    # -- queries --------------------------------------------------------------------
    def batch_query(self, points: Sequence[int]) -> list:
        if len(points) > self.config.b:
            raise BatchTooLarge(f"batch of {len(points)} exceeds b={self.config.b}")
        if not points:
            raise ValueError("empty batch")
        lo, hi = self.lo, self._hi
        first = self._first
        erased = self.erased
        corrupted = self.corrupted
        values = self._values
        record = self.record
        tr = self.transcript
        self._window_open = False
        out = []
        for x in points:
            if not lo <= x < hi:
                raise OutOfDomain(f"point {x} outside the domain")
            a = first.get(x, _MISSING)
            if a is _MISSING:
                if x in erased:
                    a = None
                    self.manipulation_seen = True
                elif corrupted and x in corrupted:
                    a = corrupted[x]
                    if a != values[x - lo]:
                        self.manipulation_seen = True
                else:
                    a = values[x - lo]
                first[x] = a
            elif a is None:
                self.manipulation_seen = True
            if record:
                tr.append(("Q", x, a))
            out.append(a)
        self.queries += len(points)
        self.clock += 1
        if record:
            tr.append(("B",))
        self._window_open = True
        self._window_spent = 0
        adv = self.adversary
        if adv is not None:
            reqs = adv.after_batch(points, out, self.budget())
            if reqs:
                self.apply_manipulations(reqs)
        return out

    def query(self, x: int):
        return self.batch_query((x,))[0]

    def first_answer(self, x: int):
        return self._first.get(x, _MISSING)

    def view_value(self, x: int):
        """Current oracle view at x (ignores first-answer memory)."""
        if x in self.erased:
            return None
        if x in self.corrupted:
            return self.corrupted[x]
        return self._values[x - self.lo]

    # -- manipulations --------------------------------------------------------------
    def apply_manipulations(self, requests: Sequence[Manipulation]) -> int:
        """Apply all requests or none: a list costing more than the window's
        remaining budget is rejected whole. Returns the budget consumed."""
        if not self._window_open:
            raise WindowClosed("manipulations land only between batches")
        kind = self.config.kind
        lo, hi = self.lo, self._hi
        effective = []
        seen = set()
        for r in requests:
            if r.kind != kind:
                raise WrongKind(f"{r.kind} request under {kind} oracle")
            x = r.point
            if not lo <= x < hi:
                raise OutOfDomain(f"point {x} outside the domain")
            if kind == ERASURE:
                if x in self.erased or x in seen:
                    continue
                seen.add(x)
            effective.append(r)
        cost = len(effective)
        if cost == 0 or cost > self.budget():
            return 0
        tr = self.transcript
        for r in effective:
            if kind == ERASURE:
                self.erased.add(r.point)
            else:
                self.corrupted[r.point] = r.value
            if self.record:
                tr.append(("M", kind, r.point, r.value))
        self.spent += cost
        self._window_spent += cost
        return cost

    # -- transcript -----------------------------------------------------------------
    def header(self) -> dict:
        h = {"domain": f"{self.domain_kind}:{self.n}"}
        h.update(self.config.header_fields())
        h["seed"] = "none" if self.seed is None else str(self.seed)
        return h

    def dump_transcript(self) -> str:
        return format_transcript(self.header(), self.transcript)


# ---- serialization -------------------------------------------------------------------

_HEADER_TAG = "# olt-transcript"


def format_value(v) -> str:
    if v is None:
        return "_"
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
    if isinstance(v, float):
        return repr(v)
    return str(int(v))


def parse_value(s: str):
    if s == "_":
        return None
    if "/" in s:
        return Fraction(s)
    try:
        return int(s)
    except ValueError:
        return float(s)


def format_transcript(header: dict, events: Sequence[tuple]) -> str:
    lines = [_HEADER_TAG + " " + " ".join(f"{k}={v}" for k, v in header.items())]
    for ev in events:
        tag = ev[0]
        if tag == "Q":
            lines.append(f"Q {ev[1]} {format_value(ev[2])}")
        elif tag == "B":
            lines.append("B")
        else:
            line = f"M {ev[1]} {ev[2]}"
            if ev[1] == CORRUPTION:
                line += " " + format_value(ev[3])
            lines.append(line)
    return "\n".join(lines) + "\n"


def parse_transcript(text: str) -> tuple[dict, list]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith(_HEADER_TAG):
        raise MalformedTranscript("missing header line")
    header = {}
    for tok in lines[0][len(_HEADER_TAG):].split():
        k, sep, v = tok.partition("=")
        if not sep:
            raise MalformedTranscript(f"bad header token {tok!r}")
        header[k] = v
    for key in ("domain", "t", "b", "scheduling", "kind"):
        if key not in header:
            raise MalformedTranscript(f"header lacks {key}")
    events = []
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        try:
            if parts[0] == "Q" and len(parts) == 3:
                events.append(("Q", int(parts[1]), parse_value(parts[2])))
            elif parts[0] == "B" and len(parts) == 1:
                events.append(("B",))
            elif parts[0] == "M" and len(parts) in (3, 4):
                val = parse_value(parts[3]) if len(parts) == 4 else None
                events.append(("M", parts[1], int(parts[2]), val))
            else:
                raise ValueError
        except (ValueError, IndexError):
            raise MalformedTranscript(f"line {lineno}: {ln!r}") from None
    return header, events


def config_from_header(header: dict) -> OracleConfig:
    try:
        return OracleConfig(
            t=Fraction(header["t"]),
            b=int(header["b"]),
            scheduling=header["scheduling"],
            kind=header["kind"],
            pre_game_manipulation=header.get("pre_game", "0") == "1",
        )
    except (ValueError, KeyError) as exc:
        raise MalformedTranscript(str(exc)) from None


@dataclass(frozen=True)
class ReplayVerdict:
    consistent: bool
    event: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.consistent


def replay(transcript, base) -> ReplayVerdict:
    """Re-simulate a transcript against the pristine input and check every rule:
    batch sizes, manipulation windows and budgets, erasure monotonicity and
    first-answer consistency. ``transcript`` is text or a (header, events) pair."""
    if isinstance(transcript, str):
        header, events = parse_transcript(transcript)
    else:
        header, events = transcript
    cfg = config_from_header(header)
    kind_name, lo, size = base.oracle_domain()
    if header["domain"] != f"{kind_name}:{base.n}":
        raise MalformedTranscript(f"transcript domain {header['domain']} does not match the input")
    values = base.oracle_values()
    hi = lo + size

    first: dict = {}
    erased: set = set()
    corrupted: dict = {}
    clock = spent = window_spent = in_batch = 0
    window_open = cfg.pre_game_manipulation

    def bad(k, why):
        return ReplayVerdict(False, k, why)

    for k, ev in enumerate(events):
        tag = ev[0]
        if tag == "Q":
            x, a = ev[1], ev[2]
            if not lo <= x < hi:
                return bad(k, f"query {x} outside the domain")
            if in_batch == cfg.b:
                return bad(k, f"batch exceeds b={cfg.b}")
            window_open = False
            in_batch += 1
            if a is None and cfg.kind != ERASURE:
                return bad(k, "erasure symbol under corruption oracle")
            if x in first:
                if first[x] != a:
                    return bad(k, f"repeat query at {x} disagrees with its first answer")
                continue
            if x in erased:
                expect = None
            elif x in corrupted:
                expect = corrupted[x]
            else:
                expect = values[x - lo]
            if a != expect or (a is None) != (expect is None):
                if expect is None:
                    return bad(k, f"erased point {x} answered a value")
                return bad(k, f"answer at {x} does not match the oracle view")
            first[x] = a
        elif tag == "B":
            if in_batch == 0:
                return bad(k, "empty batch")
            clock += 1
            in_batch = 0
            window_spent = 0
            window_open = True
        elif tag == "M":
            mkind, x, v = ev[1], ev[2], ev[3]
            if not window_open:
                return bad(k, "manipulation outside a post-batch window")
            if mkind != cfg.kind:
                return bad(k, f"{mkind} under {cfg.kind} oracle")
            if not lo <= x < hi:
                return bad(k, f"manipulation at {x} outside the domain")
            if mkind == ERASURE and x in erased:
                continue
            window_spent += 1
            spent += 1
            if cfg.scheduling == FIXED_RATE:
                if window_spent > allotment(clock, cfg.t):
                    return bad(k, f"window {clock} exceeds allotment {allotment(clock, cfg.t)}")
            elif spent > cumulative_cap(clock, cfg.t):
                return bad(k, f"total {spent} exceeds {clock}*t")
            if mkind == ERASURE:
                erased.add(x)
            else:
                corrupted[x] = v
        else:
            raise MalformedTranscript(f"unknown event {ev!r}")
    if in_batch:
        return bad(len(events), "unterminated batch")
    return ReplayVerdict(True)


__all__ = [
    "ERASED",
    "FIXED_RATE",
    "BUDGET_MANAGING",
    "ERASURE",
    "CORRUPTION",
    "OracleConfig",
    "AdversarialOracle",
    "OracleView",
    "Manipulation",
    "erase",
    "corrupt",
    "allotment",
    "cumulative_cap",
    "replay",
    "ReplayVerdict",
    "format_transcript",
    "parse_transcript",
    "OracleError",
    "BatchTooLarge",
    "OutOfDomain",
    "WrongKind",
    "WindowClosed",
    "MalformedTranscript",
]
