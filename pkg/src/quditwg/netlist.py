"""Line-oriented circuit description language.

One statement per line, ``#`` starts a comment::

    PATH a1 a2 a1v a2v
    EMITTER a +
    EMITTER b +
    SOURCE HV a1
    BS a1 a2
    PBS a1 a1v a1 a1v
    HWP a1v
    PS a2 V 3.141592653589793
    SCATTER a a1v
    MEASURE ideal d=4 n=2 k=0 q=0

Paths and emitters must be declared before they are referenced; the
declaration order fixes the basis ordering.  Exactly one ``SOURCE`` is
required.  Angles are plain decimal radians.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from .elements import BS, HWP45, PBS, Circuit, EmitterUnion, PhaseShift, run_circuit
from .errors import QuditWGError
from .metrics import MetricsReport
from .schemes import SchemeSpec, ideal_state
from .state import HybridState, RegisterLayout, new_state

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")
_NUMBER = re.compile(r"[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?\Z")
_ARITY = {"BS": 2, "PBS": 4, "HWP": 1, "PS": 3, "SCATTER": 2}


class ParseError(QuditWGError):
    """Syntax or validation error with a 1-based source position."""

    def __init__(self, message: str, line: int, column: int, token: str = ""):
        super().__init__(f"{line}:{column}: {message}" + (f" (at {token!r})" if token else ""))
        self.message = message
        self.line = line
        self.column = column
        self.token = token


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    column: int


@dataclass
class NetlistDocument:
    layout: RegisterLayout
    emitter_init: tuple[str, ...]
    source_pol: str
    source_path: str
    circuit: Circuit
    measures: list[SchemeSpec] = field(default_factory=list)

    def initial_state(self) -> HybridState:
        return new_state(self.layout, self.source_pol, self.source_path, self.emitter_init)

    def __eq__(self, other):
        if not isinstance(other, NetlistDocument):
            return NotImplemented
        return (self.layout == other.layout and self.emitter_init == other.emitter_init
                and self.source_pol == other.source_pol and self.source_path == other.source_path
                and self.circuit.elements == other.circuit.elements
                and self.measures == other.measures)


def _tokenize(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = [Token(m.group(), lineno, m.start() + 1) for m in re.finditer(r"\S+", line)]
        if toks:
            yield toks


def _end_position(text: str) -> tuple[int, int]:
    lines = text.splitlines()
    if not lines:
        return 1, 1
    return len(lines), len(lines[-1]) + 1


def parse(text: str) -> NetlistDocument:
    paths: list[str] = []
    emitters: list[str] = []
    inits: list[str] = []
    source = None
    elements: list = []
    measures: list[tuple[SchemeSpec, Token]] = []

    def ident(tok: Token) -> str:
        if not _IDENT.match(tok.text):
            raise ParseError("invalid identifier", tok.line, tok.column, tok.text)
        return tok.text

    def path(tok: Token) -> str:
        if tok.text not in paths:
            raise ParseError("undeclared path", tok.line, tok.column, tok.text)
        return tok.text

    def emitter(tok: Token) -> str:
        if tok.text not in emitters:
            raise ParseError("undeclared emitter", tok.line, tok.column, tok.text)
        return tok.text

    for toks in _tokenize(text):
        head, args = toks[0], toks[1:]
        kw = head.text

        def arity(n: int):
            if len(args) != n:
                at = args[n] if len(args) > n else head
                raise ParseError(f"{kw} takes {n} argument(s), got {len(args)}", at.line, at.column, at.text)

        if kw == "PATH":
            if not args:
                raise ParseError("PATH needs at least one name", head.line, head.column, kw)
            for tok in args:
                name = ident(tok)
                if name in paths or name in emitters:
                    raise ParseError("duplicate declaration", tok.line, tok.column, name)
                paths.append(name)
        elif kw == "EMITTER":
            arity(2)
            name = ident(args[0])
            if name in paths or name in emitters:
                raise ParseError("duplicate declaration", args[0].line, args[0].column, name)
            if args[1].text not in ("+", "-"):
                raise ParseError("emitter state must be + or -", args[1].line, args[1].column, args[1].text)
            emitters.append(name)
            inits.append(args[1].text)
        elif kw == "SOURCE":
            arity(2)
            if source is not None:
                raise ParseError("duplicate SOURCE", head.line, head.column, kw)
            if args[0].text not in ("H", "V", "HV"):
                raise ParseError("source polarization must be H, V or HV", args[0].line, args[0].column, args[0].text)
            source = (args[0].text, path(args[1]))
        elif kw in _ARITY:
            arity(_ARITY[kw])
            if kw == "BS":
                p1, p2 = path(args[0]), path(args[1])
                if p1 == p2:
                    raise ParseError("BS needs two distinct paths", args[1].line, args[1].column, p2)
                elements.append(BS(p1, p2))
            elif kw == "PBS":
                ports = [path(t) for t in args]
                if ports[0] == ports[1] or ports[2] == ports[3]:
                    raise ParseError("PBS ports must be pairwise distinct", head.line, head.column, kw)
                elements.append(PBS(*ports))
            elif kw == "HWP":
                elements.append(HWP45(path(args[0])))
            elif kw == "PS":
                p = path(args[0])
                if args[1].text not in ("H", "V", "*"):
                    raise ParseError("phase filter must be H, V or *", args[1].line, args[1].column, args[1].text)
                if not _NUMBER.match(args[2].text) or not math.isfinite(float(args[2].text)):
                    raise ParseError("non-numeric angle", args[2].line, args[2].column, args[2].text)
                elements.append(PhaseShift(p, args[1].text, float(args[2].text)))
            else:
                elements.append(EmitterUnion(emitter(args[0]), path(args[1])))
        elif kw == "MEASURE":
            measures.append((_parse_measure(head, args), head))
        else:
            raise ParseError("unknown statement", head.line, head.column, kw)

    if source is None:
        line, col = _end_position(text)
        raise ParseError("missing SOURCE", line, col)
    layout = RegisterLayout(tuple(paths), tuple(emitters))
    for spec, tok in measures:
        try:
            ideal_state(spec, layout)
        except QuditWGError as exc:
            raise ParseError(f"MEASURE does not fit the declared registers: {exc}",
                             tok.line, tok.column, "MEASURE") from None
    return NetlistDocument(layout, tuple(inits), source[0], source[1], Circuit(layout, elements),
                           [spec for spec, _ in measures])


def _parse_measure(head: Token, args: list[Token]) -> SchemeSpec:
    if not args or args[0].text != "ideal":
        at = args[0] if args else head
        raise ParseError("expected 'ideal' after MEASURE", at.line, at.column, at.text)
    fields = {}
    for tok in args[1:]:
        key, eq, value = tok.text.partition("=")
        if not eq or key not in ("d", "n", "k", "q") or key in fields:
            raise ParseError("expected one each of d=, n=, k=, q=", tok.line, tok.column, tok.text)
        try:
            fields[key] = [int(v) for v in value.split(",")] if key == "q" else int(value)
        except ValueError:
            raise ParseError("expected integer value", tok.line, tok.column, tok.text) from None
    missing = {"d", "n", "k", "q"} - fields.keys()
    if missing:
        raise ParseError(f"MEASURE missing {', '.join(sorted(missing))}", head.line, head.column, "MEASURE")
    try:
        return SchemeSpec(fields["d"], fields["n"], k=fields["k"], shifts=tuple(fields["q"]))
    except QuditWGError as exc:
        raise ParseError(str(exc), head.line, head.column, "MEASURE") from None


def _fmt_element(el) -> str:
    if isinstance(el, BS):
        return f"BS {el.p1} {el.p2}"
    if isinstance(el, PBS):
        return f"PBS {el.in1} {el.in2} {el.out1} {el.out2}"
    if isinstance(el, HWP45):
        return f"HWP {el.path}"
    if isinstance(el, PhaseShift):
        return f"PS {el.path} {el.pol_filter} {float(el.theta)!r}"
    if isinstance(el, EmitterUnion):
        return f"SCATTER {el.emitter} {el.path}"
    raise TypeError(f"unknown element {el!r}")


def to_text(doc: NetlistDocument) -> str:
    """Canonical form: one statement per line, single spaces."""
    lines = ["PATH " + " ".join(doc.layout.path_names)]
    lines += [f"EMITTER {e} {s}" for e, s in zip(doc.layout.emitters, doc.emitter_init)]
    lines.append(f"SOURCE {doc.source_pol} {doc.source_path}")
    lines += [_fmt_element(el) for el in doc.circuit.elements]
    for m in doc.measures:
        q = ",".join(str(x) for x in m.shifts)
        lines.append(f"MEASURE ideal d={m.d} n={m.n} k={m.k} q={q}")
    return "\n".join(lines) + "\n"


def document(circuit: Circuit, measures=(), source: tuple[str, str] = ("HV", "a1"),
             emitter_init: tuple[str, ...] | None = None) -> NetlistDocument:
    inits = emitter_init or ("+",) * circuit.layout.n_emitters
    return NetlistDocument(circuit.layout, tuple(inits), source[0], source[1], circuit, list(measures))


def load(path: str | Path) -> NetlistDocument:
    return parse(Path(path).read_text(encoding="utf-8"))


@dataclass
class Execution:
    state: HybridState
    reports: list[MetricsReport]


def execute(doc: NetlistDocument, params) -> Execution:
    """Run the document; one report per ``MEASURE`` statement."""
    state = run_circuit(doc.circuit, params, doc.initial_state())
    reports = [MetricsReport.evaluate(state, ideal_state(m, doc.layout)) for m in doc.measures]
    return Execution(state, reports)
