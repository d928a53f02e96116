"""Reader for TPTP CNF problems, with ``include`` support."""
from __future__ import annotations

import os
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .terms import Clause, Literal, Symbol, const, template_var

__all__ = [
    "ParseDiagnostic",
    "TPTPError",
    "Problem",
    "parse_problem",
    "parse_string",
    "select_start_clauses",
    "format_problem",
]


@dataclass(frozen=True)
class ParseDiagnostic:
    file: str
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}: {self.message}"


class TPTPError(Exception):
    def __init__(self, diagnostic: ParseDiagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


@dataclass
class Problem:
    clauses: list
    symbols: dict = field(default_factory=dict)  # (name, kind) -> Symbol
    origin: str = "<string>"
    has_equality: bool = False

    def clause_named(self, name: str) -> Clause:
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*|/\*.*?\*/)
  | (?P<upper>[A-Z][A-Za-z0-9_]*)
  | (?P<lower>[a-z][A-Za-z0-9_]*)
  | (?P<dollar>\$\$?[a-z][A-Za-z0-9_]*)
  | (?P<squote>'(?:[^'\\]|\\.)*')
  | (?P<dquote>"(?:[^"\\]|\\.)*")
  | (?P<number>[+-]?[0-9]+(?:[./][0-9]+)?(?:[Ee][+-]?[0-9]+)?)
  | (?P<op>!=|=>|<=>|<=|<~>|~\||~&|[(),.|~\[\]=&:!?*+<>@-])
  | (?P<other>.)
    """,
    re.VERBOSE | re.DOTALL,
)

_LOWER_WORD = re.compile(r"[a-z][A-Za-z0-9_]*\Z")

_AXIOM_ROLES = {"axiom", "hypothesis", "definition", "assumption", "lemma", "theorem", "corollary"}


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col


def _tokenize(text: str, origin: str) -> list:
    toks = []
    line, line_start = 1, 0
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        kind = m.lastgroup
        s = m.group()
        if kind == "other":
            raise TPTPError(ParseDiagnostic(origin, line, pos - line_start + 1, f"unexpected character {s!r}"))
        if kind == "comment" and s.startswith("/*") and not s.endswith("*/"):
            raise TPTPError(ParseDiagnostic(origin, line, pos - line_start + 1, "unterminated comment"))
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind, s, line, pos - line_start + 1))
        nl = s.count("\n")
        if nl:
            line += nl
            line_start = pos + s.rindex("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


def _unquote(text: str) -> str:
    body = re.sub(r"\\(.)", r"\1", text[1:-1])
    if _LOWER_WORD.match(body):
        return body
    return text


class _Parser:
    def __init__(self, text: str, origin: str, state: "_State", base_dir: Path | None):
        self.toks = _tokenize(text, origin)
        self.i = 0
        self.origin = origin
        self.state = state
        self.base_dir = base_dir

    # -- token helpers
    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, tok: _Tok, message: str):
        raise TPTPError(ParseDiagnostic(self.origin, tok.line, tok.col, message))

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.text != text:
            self.error(t, f"expected {text!r}, found {t.text or 'end of input'!r}")
        return t

    # -- top level
    def parse(self, selection: set | None = None) -> None:
        while self.peek().kind != "eof":
            t = self.next()
            if t.kind != "lower":
                self.error(t, f"expected an annotated formula, found {t.text!r}")
            if t.text == "include":
                self.include(t)
            elif t.text == "cnf":
                self.cnf(selection)
            elif t.text in ("fof", "tff", "thf", "tcf", "tpi"):
                self.error(t, f"{t.text} formulae are not supported (CNF only)")
            else:
                self.error(t, f"unknown directive {t.text!r}")

    def name(self) -> str:
        t = self.next()
        if t.kind == "lower" or t.kind == "number":
            return t.text
        if t.kind == "squote":
            return _unquote(t.text)
        self.error(t, "expected a formula name")

    def include(self, start: _Tok) -> None:
        self.expect("(")
        t = self.next()
        if t.kind != "squote":
            self.error(t, "expected a quoted file name")
        fname = t.text[1:-1]
        selection = None
        if self.peek().text == ",":
            self.next()
            self.expect("[")
            selection = set()
            while self.peek().text != "]":
                selection.add(self.name())
                if self.peek().text == ",":
                    self.next()
            self.expect("]")
        self.expect(")")
        self.expect(".")
        path = self.state.resolve_include(fname, self.base_dir)
        if path is None:
            self.error(start, f"cannot find included file {fname!r}")
        self.state.load(path, selection)

    def cnf(self, selection: set | None) -> None:
        self.expect("(")
        name = self.name()
        self.expect(",")
        role_tok = self.next()
        if role_tok.kind != "lower":
            self.error(role_tok, "expected a formula role")
        self.expect(",")
        self.varmap = {}
        self.eq_seen = False
        lits = self.disjunction()
        if self.peek().text == ",":
            self.next()
            self.skip_annotations()
        self.expect(")")
        self.expect(".")
        if selection is not None and name not in selection:
            return
        role = role_tok.text
        if role == "negated_conjecture":
            role_kind = "negated_conjecture"
        elif role in _AXIOM_ROLES:
            role_kind = "axiom"
        else:
            role_kind = "other"
        if self.eq_seen:
            self.state.has_equality = True
        clause = _make_clause(name, role_kind, lits, len(self.varmap))
        if clause is not None:
            self.state.clauses.append(clause)

    def skip_annotations(self) -> None:
        depth = 0
        while True:
            t = self.peek()
            if t.kind == "eof":
                self.error(t, "unterminated annotation")
            if t.text in ("(", "["):
                depth += 1
            elif t.text in (")", "]"):
                if depth == 0:
                    return
                depth -= 1
            self.next()

    def disjunction(self) -> list:
        lits = self.disjunct()
        while self.peek().text == "|":
            self.next()
            lits.extend(self.disjunct())
        return lits

    def disjunct(self) -> list:
        if self.peek().text == "(":
            self.next()
            lits = self.disjunction()
            self.expect(")")
            return lits
        return [self.literal()]

    def literal(self):
        if self.peek().text == "~":
            self.next()
            if self.peek().text == "(":
                self.next()
                lit = self.literal()
                self.expect(")")
            else:
                lit = self.literal()
            return _negate(lit)
        t = self.peek()
        if t.kind == "dollar" and t.text in ("$true", "$false"):
            self.next()
            return t.text == "$true"
        if t.kind in ("upper", "number", "dquote") or (t.kind == "dollar"):
            lhs = self.term()
            return self.equation(lhs, t)
        pred, args = self.application()
        if self.peek().text in ("=", "!="):
            lhs = self.build_term(pred, args, t)
            return self.equation(lhs, t)
        self.state.declare(pred, len(args), "predicate", self, t)
        return Literal(True, pred, tuple(args))

    def equation(self, lhs, start: _Tok):
        op = self.next()
        if op.text not in ("=", "!="):
            self.error(op, "expected '=' or '!='")
        rhs = self.term()
        self.eq_seen = True
        self.state.declare("=", 2, "predicate", self, start)
        return Literal(op.text == "=", "=", (lhs, rhs))

    def application(self):
        t = self.next()
        if t.kind == "lower":
            name = t.text
        elif t.kind == "squote":
            name = _unquote(t.text)
        else:
            self.error(t, f"expected a predicate or function symbol, found {t.text!r}")
        args = []
        if self.peek().text == "(":
            self.next()
            args.append(self.term())
            while self.peek().text == ",":
                self.next()
                args.append(self.term())
            self.expect(")")
        return sys.intern(name), args

    def build_term(self, name, args, tok):
        self.state.declare(name, len(args), "function", self, tok)
        return (name, *args)

    def term(self):
        t = self.peek()
        if t.kind == "upper":
            self.next()
            idx = self.varmap.setdefault(t.text, len(self.varmap))
            return template_var(idx)
        if t.kind in ("number", "dquote"):
            self.next()
            self.state.declare(t.text, 0, "function", self, t)
            return const(sys.intern(t.text))
        if t.kind in ("lower", "squote"):
            name, args = self.application()
            return self.build_term(name, args, t)
        self.error(t, f"expected a term, found {t.text or 'end of input'!r}")


def _negate(lit):
    if isinstance(lit, bool):
        return not lit
    return lit.negate()


def _make_clause(name: str, role: str, lits: list, nvars: int):
    """Build a clause; None when it is a tautology."""
    out = []
    for lit in lits:
        if lit is True:
            return None
        if lit is False:
            continue
        if lit.negate() in out:
            return None
        if lit not in out:
            out.append(lit)
    return Clause(name, role, tuple(out), nvars)


class _State:
    def __init__(self, include_dir: Path | None):
        self.include_dir = include_dir
        self.clauses: list = []
        self.symbols: dict = {}
        self.has_equality = False

    def declare(self, name, arity, kind, parser: _Parser, tok: _Tok) -> None:
        key = (name, kind)
        sym = self.symbols.get(key)
        if sym is None:
            self.symbols[key] = Symbol(name, arity, kind)
        elif sym.arity != arity:
            parser.error(tok, f"{kind} symbol {name!r} used with arity {arity}, previously {sym.arity}")

    def resolve_include(self, fname: str, base_dir: Path | None) -> Path | None:
        roots = []
        if self.include_dir is not None:
            roots.append(self.include_dir)
        if base_dir is not None:
            roots.append(base_dir)
        env = os.environ.get("TPTP")
        if env:
            roots.append(Path(env))
        for root in roots:
            p = root / fname
            if p.is_file():
                return p
        return None

    def load(self, path: Path, selection: set | None = None) -> None:
        text = path.read_text()
        _Parser(text, str(path), self, path.parent).parse(selection)


def parse_problem(path, include_dir=None) -> Problem:
    """Parse a CNF problem file.  Raises :class:`TPTPError` on bad input."""
    path = Path(path)
    state = _State(Path(include_dir) if include_dir is not None else None)
    try:
        text = path.read_text()
    except OSError as e:
        raise TPTPError(ParseDiagnostic(str(path), 1, 1, f"cannot read file: {e.strerror}")) from e
    _Parser(text, str(path), state, path.parent).parse()
    return Problem(state.clauses, state.symbols, str(path), state.has_equality)


def parse_string(text: str, origin: str = "<string>", include_dir=None) -> Problem:
    state = _State(Path(include_dir) if include_dir is not None else None)
    _Parser(text, origin, state, None).parse()
    return Problem(state.clauses, state.symbols, origin, state.has_equality)


def select_start_clauses(problem: Problem, policy: str = "conjecture-first") -> list:
    if policy == "all":
        return list(problem.clauses)
    if policy != "conjecture-first":
        raise ValueError(f"unknown start policy {policy!r}")
    conj = [c for c in problem.clauses if c.role == "negated_conjecture"]
    return conj if conj else list(problem.clauses)


# --- printing ----------------------------------------------------------------

def _fmt_name(name: str) -> str:
    if _LOWER_WORD.match(name) or re.fullmatch(r"[0-9]+", name):
        return name
    if name.startswith("'"):
        return name
    return "'" + name.replace("\\", "\\\\").replace("'", "\\'") + "'"


def _fmt_term(t) -> str:
    if t[0] is None:
        return f"X{t[2]}"
    if len(t) == 1:
        return t[0]
    return f"{t[0]}({','.join(_fmt_term(a) for a in t[1:])})"


def _fmt_literal(lit: Literal) -> str:
    if lit.pred == "=":
        op = "=" if lit.positive else "!="
        return f"{_fmt_term(lit.args[0])} {op} {_fmt_term(lit.args[1])}"
    atom = lit.pred if not lit.args else f"{lit.pred}({','.join(_fmt_term(a) for a in lit.args)})"
    return atom if lit.positive else "~ " + atom


_ROLE_TEXT = {"axiom": "axiom", "negated_conjecture": "negated_conjecture", "other": "plain"}


def format_problem(problem: Problem) -> str:
    lines = []
    for c in problem.clauses:
        body = " | ".join(_fmt_literal(lit) for lit in c.literals) if c.literals else "$false"
        lines.append(f"cnf({_fmt_name(c.name)},{_ROLE_TEXT[c.role]},\n    ( {body} )).\n")
    return "\n".join(lines)
