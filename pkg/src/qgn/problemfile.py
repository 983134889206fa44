"""Line-oriented problem files.

Example::

    # Example 3 from the built-in set
    name = example3
    n = 2
    residual = x1 - 0.4
    residual = x2 - 8
    residual = x1^2 + x2^2 - 1
    x0 = 0, 0
    notes = overdetermined, large residual at the optimum

Keys are ``name``, ``n``, ``residual`` (repeatable, in order), ``x0`` and
``notes``. Blank lines and lines starting with ``#`` are ignored.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .errors import ExprError, QGNError
from .exprparse import ParsedProblem, parse, to_vector_field
from .model import ResidualProblem

KEYS = ("name", "n", "residual", "x0", "notes")


class ProblemFileError(QGNError, ValueError):
    def __init__(self, message: str, line: Optional[int] = None, source: str = "<problem>"):
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(where + message)
        self.line = line


@dataclass(frozen=True)
class ProblemFile:
    name: str
    n: int
    residuals: tuple[str, ...]
    x0: Optional[tuple[float, ...]] = None
    notes: str = ""

    def to_parsed(self) -> ParsedProblem:
        return ParsedProblem.from_sources(self.residuals, self.n, self.name, self.x0)

    def to_problem(self) -> ResidualProblem:
        return to_vector_field(self.to_parsed())


def parse_vector(text: str) -> tuple[float, ...]:
    parts = [p.strip() for p in text.split(",")]
    if not parts or any(p == "" for p in parts):
        raise ValueError(f"malformed vector {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise ValueError(f"malformed vector {text!r}") from None


def loads(text: str, source: str = "<problem>") -> ProblemFile:
    fields: dict[str, tuple[int, str]] = {}
    residuals: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().lower(), value.strip()
        if not sep:
            raise ProblemFileError(f"expected 'key = value', got {line!r}", lineno, source)
        if key not in KEYS:
            raise ProblemFileError(f"unknown key {key!r} (known: {', '.join(KEYS)})", lineno, source)
        if key == "residual":
            residuals.append((lineno, value))
        elif key in fields:
            raise ProblemFileError(f"duplicate key {key!r}", lineno, source)
        else:
            fields[key] = (lineno, value)

    if "n" not in fields:
        raise ProblemFileError("missing required key 'n'", None, source)
    n_line, n_text = fields["n"]
    try:
        n = int(n_text)
    except ValueError:
        raise ProblemFileError(f"n must be an integer, got {n_text!r}", n_line, source) from None
    if n < 1:
        raise ProblemFileError(f"n must be >= 1, got {n}", n_line, source)
    if not residuals:
        raise ProblemFileError("at least one 'residual' line is required", None, source)
    if len(residuals) < n:
        raise ProblemFileError(
            f"{len(residuals)} residual(s) for n={n} parameters; least squares needs m >= n", None, source
        )
    for lineno, expr in residuals:
        try:
            parse(expr, n)
        except ExprError as exc:
            raise ProblemFileError(f"in residual {expr!r}: {exc}", lineno, source) from exc

    x0 = None
    if "x0" in fields:
        x_line, x_text = fields["x0"]
        try:
            x0 = parse_vector(x_text)
        except ValueError as exc:
            raise ProblemFileError(str(exc), x_line, source) from None
        if len(x0) != n:
            raise ProblemFileError(f"x0 has {len(x0)} entries, expected {n}", x_line, source)

    name = fields.get("name", (0, Path(source).stem or "problem"))[1]
    notes = fields.get("notes", (0, ""))[1]
    return ProblemFile(name, n, tuple(e for _, e in residuals), x0, notes)


def load(path) -> ProblemFile:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemFileError(f"cannot read file: {exc.strerror}", None, str(path)) from None
    return loads(text, str(path))


def dumps(pf: ProblemFile) -> str:
    lines = [f"name = {pf.name}", f"n = {pf.n}"]
    lines += [f"residual = {r}" for r in pf.residuals]
    if pf.x0 is not None:
        lines.append("x0 = " + ", ".join(repr(v) for v in pf.x0))
    if pf.notes:
        lines.append(f"notes = {pf.notes}")
    return "\n".join(lines) + "\n"
