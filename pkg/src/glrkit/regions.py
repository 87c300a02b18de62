"""Hypothesis regions over named scalar parameters.

A region is a finite union of axis-aligned cells.  Each cell constrains a
subset of the parameters to a finite union of intervals; parameters a cell
does not mention are unconstrained.  This family of sets is closed under the
predicate grammar accepted by :func:`parse_region` (comparisons, ``abs``
bands, ``and`` conjunction, ``not`` complement) and keeps suprema computable
interval by interval.

All values are immutable after construction and safe to share across threads.

Grammar::

    expr       := term ("and" term)*
    term       := "not" "(" expr ")" | comparison
    comparison := NAME OP NUMBER
                | "abs" "(" NAME "-" NUMBER ")" OP NUMBER
    OP         := "<" | "<=" | ">" | ">=" | "=="
    NAME       := [A-Za-z_][A-Za-z0-9_]*
    NUMBER     := decimal literal, optionally signed, optional exponent

Examples: ``"theta <= 0.2"``, ``"delta > -0.1"``, ``"abs(gamma - 0) < 0.223"``,
``"not(theta == 0.3)"``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping

__all__ = [
    "Interval",
    "ScalarRegion",
    "Parameter",
    "ParameterSpace",
    "Region",
    "RegionError",
    "RegionSyntaxError",
    "UnknownParameterError",
    "EmptyRegionError",
    "parse_region",
    "closure",
    "contains",
    "complement",
]

INF = math.inf

_NAME_RE = re.compile(r"[A-Za-z_]\w*\Z")


class RegionError(ValueError):
    """Base class for region construction and parsing failures."""


class RegionSyntaxError(RegionError):
    """Predicate text violates the grammar; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownParameterError(RegionError):
    """Predicate references a name not present in the parameter space."""


class EmptyRegionError(RegionError):
    """The described set contains no point; suprema over it are undefined."""


@dataclass(frozen=True)
class Interval:
    """One interval with per-endpoint open/closed flags.

    Empty intervals cannot be constructed; infinite endpoints are always
    open.  A degenerate interval (lo == hi) must be closed on both ends.
    """

    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self) -> None:
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise RegionError("interval endpoints must not be NaN")
        if self.lo == INF or self.hi == -INF:
            raise RegionError(f"invalid interval bounds [{self.lo}, {self.hi}]")
        if math.isinf(self.lo):
            object.__setattr__(self, "lo_closed", False)
        if math.isinf(self.hi):
            object.__setattr__(self, "hi_closed", False)
        if self.lo > self.hi:
            raise RegionError(f"empty interval: lo={self.lo} > hi={self.hi}")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise RegionError("degenerate interval must be closed at both ends")

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def is_bounded(self) -> bool:
        return not (math.isinf(self.lo) or math.isinf(self.hi))

    def contains(self, x: float) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def closure(self) -> "Interval":
        return Interval(
            self.lo,
            self.hi,
            lo_closed=not math.isinf(self.lo),
            hi_closed=not math.isinf(self.hi),
        )

    def intersect(self, other: "Interval") -> "Interval | None":
        if self.lo > other.lo:
            lo, lo_closed = self.lo, self.lo_closed
        elif self.lo < other.lo:
            lo, lo_closed = other.lo, other.lo_closed
        else:
            lo, lo_closed = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hi_closed = self.hi, self.hi_closed
        elif self.hi > other.hi:
            hi, hi_closed = other.hi, other.hi_closed
        else:
            hi, hi_closed = self.hi, self.hi_closed and other.hi_closed
        if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
            return None
        return Interval(lo, hi, lo_closed, hi_closed)

    def to_json_dict(self) -> dict:
        return {
            "lo": self.lo if not math.isinf(self.lo) else "-inf",
            "hi": self.hi if not math.isinf(self.hi) else "inf",
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
        }

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo}, {self.hi}{right}"


@dataclass(frozen=True)
class ScalarRegion:
    """A finite union of disjoint intervals on one axis, kept sorted.

    The empty union is representable; callers decide whether emptiness is
    an error.  Construct through :meth:`from_intervals`, which sorts and
    merges overlapping or touching pieces.
    """

    intervals: tuple[Interval, ...] = ()

    @classmethod
    def from_intervals(cls, pieces: Iterable[Interval]) -> "ScalarRegion":
        items = sorted(pieces, key=lambda iv: (iv.lo, not iv.lo_closed))
        merged: list[Interval] = []
        for iv in items:
            if not merged:
                merged.append(iv)
                continue
            last = merged[-1]
            touching = iv.lo == last.hi and (last.hi_closed or iv.lo_closed)
            if iv.lo < last.hi or touching:
                if iv.hi > last.hi:
                    hi, hi_closed = iv.hi, iv.hi_closed
                elif iv.hi == last.hi:
                    hi, hi_closed = last.hi, last.hi_closed or iv.hi_closed
                else:
                    hi, hi_closed = last.hi, last.hi_closed
                lo_closed = last.lo_closed or (iv.lo == last.lo and iv.lo_closed)
                merged[-1] = Interval(last.lo, hi, lo_closed, hi_closed)
            else:
                merged.append(iv)
        return cls(tuple(merged))

    @classmethod
    def point(cls, x: float) -> "ScalarRegion":
        return cls((Interval(x, x),))

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def contains(self, x: float) -> bool:
        return any(iv.contains(x) for iv in self.intervals)

    def closure(self) -> "ScalarRegion":
        return ScalarRegion.from_intervals(iv.closure() for iv in self.intervals)

    def intersect(self, other: "ScalarRegion") -> "ScalarRegion":
        pieces = []
        for a in self.intervals:
            for b in other.intervals:
                got = a.intersect(b)
                if got is not None:
                    pieces.append(got)
        return ScalarRegion.from_intervals(pieces)

    def complement(self, domain: Interval) -> "ScalarRegion":
        """Set complement within ``domain``; assumes self is inside it."""
        gaps: list[Interval] = []
        cursor, cursor_closed = domain.lo, domain.lo_closed
        for iv in self.intervals:
            hi, hi_closed = iv.lo, not iv.lo_closed
            if cursor < hi or (cursor == hi and cursor_closed and hi_closed):
                gaps.append(Interval(cursor, hi, cursor_closed, hi_closed))
            cursor, cursor_closed = iv.hi, not iv.hi_closed
        if cursor < domain.hi or (
            cursor == domain.hi and cursor_closed and domain.hi_closed
        ):
            gaps.append(Interval(cursor, domain.hi, cursor_closed, domain.hi_closed))
        return ScalarRegion.from_intervals(gaps)

    def to_json_list(self) -> list[dict]:
        return [iv.to_json_dict() for iv in self.intervals]

    def __str__(self) -> str:
        return " u ".join(str(iv) for iv in self.intervals) if self.intervals else "{}"


@dataclass(frozen=True)
class Parameter:
    """One named scalar parameter with its domain interval."""

    name: str
    lower: float = -INF
    upper: float = INF
    lower_closed: bool = True
    upper_closed: bool = True

    def __post_init__(self) -> None:
        if not _NAME_RE.match(self.name):
            raise RegionError(f"invalid parameter name {self.name!r}")
        if not self.lower < self.upper:
            raise RegionError(
                f"parameter {self.name!r} needs lower < upper, got "
                f"[{self.lower}, {self.upper}]"
            )
        if math.isinf(self.lower):
            object.__setattr__(self, "lower_closed", False)
        if math.isinf(self.upper):
            object.__setattr__(self, "upper_closed", False)

    @property
    def domain(self) -> Interval:
        return Interval(self.lower, self.upper, self.lower_closed, self.upper_closed)


@dataclass(frozen=True)
class ParameterSpace:
    """Ordered collection of parameters; the ambient box for all regions."""

    params: tuple[Parameter, ...]

    def __post_init__(self) -> None:
        names = [p.name for p in self.params]
        if not names:
            raise RegionError("parameter space must not be empty")
        if len(set(names)) != len(names):
            raise RegionError(f"duplicate parameter names: {names}")

    @classmethod
    def from_bounds(cls, **bounds: tuple[float, float]) -> "ParameterSpace":
        """Closed-box shorthand: ``ParameterSpace.from_bounds(theta=(0, 1))``."""
        return cls(tuple(Parameter(n, lo, hi) for n, (lo, hi) in bounds.items()))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params)

    def param(self, name: str) -> Parameter:
        for p in self.params:
            if p.name == name:
                return p
        raise UnknownParameterError(
            f"unknown parameter {name!r}; space has {list(self.names)}"
        )

    def domain(self, name: str) -> Interval:
        return self.param(name).domain

    def contains_point(self, point: Mapping[str, float]) -> bool:
        return all(p.domain.contains(point[p.name]) for p in self.params)


# A cell is a conjunction of per-parameter constraints, stored as a tuple of
# (name, ScalarRegion) pairs sorted by name.  The region is the union of its
# cells; cells may overlap (harmless for membership and suprema).
Cell = tuple[tuple[str, ScalarRegion], ...]


def _cell_from_mapping(constraints: Mapping[str, ScalarRegion]) -> Cell:
    return tuple(sorted(constraints.items(), key=lambda item: item[0]))


def _cell_sort_key(cell: Cell):
    return tuple(
        (name,) + tuple(
            (iv.lo, iv.hi, iv.lo_closed, iv.hi_closed) for iv in sr.intervals
        )
        for name, sr in cell
    )


def _intersect_cells(a: Cell, b: Cell) -> Cell | None:
    out = dict(a)
    for name, sr in b:
        if name in out:
            merged = out[name].intersect(sr)
            if merged.is_empty:
                return None
            out[name] = merged
        else:
            out[name] = sr
    return _cell_from_mapping(out)


@dataclass(frozen=True)
class Region:
    """A subset of the parameter space: a finite union of cells.

    Public constructors never produce an empty region; the internal algebra
    tolerates emptiness so that complements of intersections normalize
    correctly before the final emptiness check.
    """

    space: ParameterSpace
    cells: tuple[Cell, ...]

    @classmethod
    def build(
        cls,
        space: ParameterSpace,
        cells: Iterable[Mapping[str, ScalarRegion]],
        allow_empty: bool = False,
    ) -> "Region":
        normalized: list[Cell] = []
        for constraints in cells:
            cell: dict[str, ScalarRegion] = {}
            empty = False
            for name, sr in constraints.items():
                domain = space.domain(name)
                clipped = sr.intersect(ScalarRegion((domain,)))
                if clipped.is_empty:
                    empty = True
                    break
                if clipped == ScalarRegion((domain,)):
                    continue  # unconstrained once clipped to the box
                cell[name] = clipped
            if empty:
                continue
            normalized.append(_cell_from_mapping(cell))
        # Drop duplicates and anything subsumed by an unconstrained cell.
        unique = sorted(set(normalized), key=_cell_sort_key)
        if any(cell == () for cell in unique):
            unique = [()]
        if not unique and not allow_empty:
            raise EmptyRegionError("region is empty")
        return cls(space, tuple(unique))

    @classmethod
    def full(cls, space: ParameterSpace) -> "Region":
        return cls(space, ((),))

    @classmethod
    def from_intervals(
        cls, space: ParameterSpace, **constraints: Iterable[Interval]
    ) -> "Region":
        """Single-cell region from per-parameter interval lists."""
        cell = {
            name: ScalarRegion.from_intervals(ivs) for name, ivs in constraints.items()
        }
        return cls.build(space, [cell])

    @property
    def is_empty(self) -> bool:
        return not self.cells

    @property
    def is_full(self) -> bool:
        return any(cell == () for cell in self.cells)

    def constraint(self, name: str) -> ScalarRegion:
        """Constraint on one parameter, valid for single-cell regions."""
        if len(self.cells) != 1:
            raise RegionError("constraint() requires a single-cell region")
        got = dict(self.cells[0]).get(name)
        if got is None:
            domain = self.space.domain(name)
            return ScalarRegion((domain,))
        return got

    def contains(self, point: Mapping[str, float]) -> bool:
        missing = [n for n in self.space.names if n not in point]
        if missing:
            raise RegionError(f"point is missing coordinates {missing}")
        if not self.space.contains_point(point):
            return False
        for cell in self.cells:
            if all(sr.contains(point[name]) for name, sr in cell):
                return True
        return False

    def closure(self) -> "Region":
        cells = [
            {name: sr.closure() for name, sr in cell} for cell in self.cells
        ]
        return Region.build(self.space, cells, allow_empty=True)

    def intersect(self, other: "Region") -> "Region":
        if other.space.names != self.space.names:
            raise RegionError("regions live in different parameter spaces")
        cells = []
        for a in self.cells:
            for b in other.cells:
                got = _intersect_cells(a, b)
                if got is not None:
                    cells.append(dict(got))
        return Region.build(self.space, cells, allow_empty=True)

    def _complement(self) -> "Region":
        result = Region.full(self.space)
        for cell in self.cells:
            if cell == ():
                return Region.build(self.space, [], allow_empty=True)
            pieces: list[Mapping[str, ScalarRegion]] = []
            for name, sr in cell:
                comp = sr.complement(self.space.domain(name))
                if not comp.is_empty:
                    pieces.append({name: comp})
            piece_region = Region.build(self.space, pieces, allow_empty=True)
            result = result.intersect(piece_region)
        return result

    def to_json_dict(self) -> dict:
        return {
            "space": [p.name for p in self.space.params],
            "cells": [
                {name: sr.to_json_list() for name, sr in cell} for cell in self.cells
            ],
        }

    def __str__(self) -> str:
        if self.is_full:
            return "<full space>"
        parts = []
        for cell in self.cells:
            parts.append(
                " and ".join(f"{name} in {sr}" for name, sr in cell) or "<full>"
            )
        return " or ".join(parts)


def closure(region: Region) -> Region:
    """Close every interval endpoint, clipped to the space box."""
    if region.is_empty:
        raise EmptyRegionError("closure of an empty region")
    return region.closure()


def contains(region: Region, point: Mapping[str, float]) -> bool:
    """Exact membership test, honoring open/closed endpoints."""
    return region.contains(point)


def complement(region: Region) -> Region:
    """Set complement within the space box; errors if the result is empty."""
    if region.is_empty:
        raise EmptyRegionError("complement of an empty region")
    out = region._complement()
    if out.is_empty:
        raise EmptyRegionError("complement is empty: region covers the whole space")
    return out


# --- predicate parsing ------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_]\w*)
  | (?P<op><=|>=|==|<|>)
  | (?P<lp>\()
  | (?P<rp>\))
  | (?P<minus>-)
    """,
    re.VERBOSE,
)

_KEYWORDS = {"and", "not", "abs"}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise RegionSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tok_text = m.group()
            if kind == "name" and tok_text in _KEYWORDS:
                kind = tok_text
            tokens.append(_Token(kind, tok_text, pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, space: ParameterSpace):
        self.text = text
        self.space = space
        self.tokens = _tokenize(text)
        self.idx = 0

    def peek(self) -> _Token:
        return self.tokens[self.idx]

    def advance(self) -> _Token:
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise RegionSyntaxError(
                f"expected {what}, found {tok.text!r}" if tok.text else f"expected {what}",
                tok.pos,
            )
        return self.advance()

    def parse(self) -> Region:
        region = self.parse_expr()
        tok = self.peek()
        if tok.kind != "end":
            raise RegionSyntaxError(f"unexpected trailing input {tok.text!r}", tok.pos)
        if region.is_empty:
            raise EmptyRegionError(f"predicate selects an empty region: {self.text!r}")
        return region

    def parse_expr(self) -> Region:
        region = self.parse_term()
        while self.peek().kind == "and":
            self.advance()
            region = region.intersect(self.parse_term())
        return region

    def parse_term(self) -> Region:
        tok = self.peek()
        if tok.kind == "not":
            self.advance()
            self.expect("lp", "'(' after not")
            inner = self.parse_expr()
            self.expect("rp", "')'")
            return inner._complement()
        if tok.kind == "abs":
            return self.parse_abs()
        if tok.kind == "name":
            return self.parse_comparison()
        raise RegionSyntaxError(
            f"expected a comparison, found {tok.text!r}" if tok.text else "unexpected end of input",
            tok.pos,
        )

    def parse_comparison(self) -> Region:
        name_tok = self.advance()
        self.space.param(name_tok.text)  # raises UnknownParameterError
        op = self.expect("op", "a comparison operator").text
        value = self.parse_number()
        sr = _comparison_region(op, value)
        return Region.build(self.space, [{name_tok.text: sr}], allow_empty=True)

    def parse_abs(self) -> Region:
        self.advance()  # abs
        self.expect("lp", "'(' after abs")
        name_tok = self.expect("name", "a parameter name")
        self.space.param(name_tok.text)
        center = self.parse_abs_offset()
        self.expect("rp", "')'")
        op = self.expect("op", "a comparison operator").text
        radius = self.parse_number()
        sr = _abs_region(op, center, radius)
        return Region.build(self.space, [{name_tok.text: sr}], allow_empty=True)

    def parse_abs_offset(self) -> float:
        tok = self.peek()
        if tok.kind == "minus":
            self.advance()
            return self.parse_number()
        if tok.kind == "num" and tok.text.startswith("-"):
            # "abs(x -0.5)" tokenizes the sign into the literal
            self.advance()
            return -float(tok.text)
        raise RegionSyntaxError("expected '- constant' inside abs(...)", tok.pos)

    def parse_number(self) -> float:
        tok = self.expect("num", "a numeric constant")
        return float(tok.text)


def _comparison_region(op: str, c: float) -> ScalarRegion:
    if op == "<":
        return ScalarRegion.from_intervals([Interval(-INF, c, hi_closed=False)])
    if op == "<=":
        return ScalarRegion.from_intervals([Interval(-INF, c, hi_closed=True)])
    if op == ">":
        return ScalarRegion.from_intervals([Interval(c, INF, lo_closed=False)])
    if op == ">=":
        return ScalarRegion.from_intervals([Interval(c, INF, lo_closed=True)])
    if op == "==":
        return ScalarRegion.point(c)
    raise AssertionError(op)


def _abs_region(op: str, center: float, radius: float) -> ScalarRegion:
    if op in ("<", "<="):
        if radius < 0 or (radius == 0 and op == "<"):
            return ScalarRegion()
        closed = op == "<="
        if radius == 0:
            return ScalarRegion.point(center)
        return ScalarRegion.from_intervals(
            [Interval(center - radius, center + radius, closed, closed)]
        )
    if op in (">", ">="):
        if radius < 0 or (radius == 0 and op == ">="):
            return ScalarRegion.from_intervals([Interval(-INF, INF)])
        if radius == 0:  # op is ">": everything except the center
            return ScalarRegion.point(center).complement(Interval(-INF, INF))
        closed = op == ">="
        return ScalarRegion.from_intervals(
            [
                Interval(-INF, center - radius, hi_closed=closed),
                Interval(center + radius, INF, lo_closed=closed),
            ]
        )
    if op == "==":
        if radius < 0:
            return ScalarRegion()
        if radius == 0:
            return ScalarRegion.point(center)
        return ScalarRegion.from_intervals(
            [
                Interval(center - radius, center - radius),
                Interval(center + radius, center + radius),
            ]
        )
    raise AssertionError(op)


def parse_region(text: str, space: ParameterSpace) -> Region:
    """Parse a predicate string into the region it describes.

    The result is intersected with the space box.  Raises
    :class:`RegionSyntaxError` (with position) for malformed input,
    :class:`UnknownParameterError` for names outside the space, and
    :class:`EmptyRegionError` when no point satisfies the predicate.
    """
    return _Parser(text, space).parse()
