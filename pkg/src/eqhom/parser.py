"""Line-oriented presentation formats.

``.lwv`` files declare a term rewriting presentation::

    # comment
    sorts X Y
    op plus : X X -> X
    op zero : -> X
    var x : X
    rule r1 : plus(x, zero) -> x
    order r1 r2          # optional, overrides file order
    budget steps 10000   # optional
    budget join 1000     # optional

Terms use prefix syntax ``f(t1,...,tn)``; constants are written bare.
``.srs`` files declare a string rewriting presentation::

    letters a b
    rule s1 : a a ->     # words are space-separated, empty right side = ε

Errors carry line and column numbers and a kind tag.
"""

from __future__ import annotations

import re

from .monoid import Srs, SrsRule
from .rewrite import Rule, Trs, DEFAULT_JOIN_BUDGET, DEFAULT_STEP_BUDGET
from .terms import Signature, Term, TermError, Var, render_term, variables

IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class ParseError(Exception):
    def __init__(self, kind: str, message: str, line: int, column: int = 0):
        super().__init__(f"{kind} at line {line}:{column}: {message}")
        self.kind = kind
        self.line = line
        self.column = column


class _TermParser:
    def __init__(self, text: str, line: int, sig: Signature, vars_: dict[str, str]):
        self.text = text
        self.line = line
        self.pos = 0
        self.sig = sig
        self.vars = vars_

    def error(self, kind: str, message: str):
        raise ParseError(kind, message, self.line, self.pos + 1)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def ident(self) -> str:
        self.skip_ws()
        m = IDENT.match(self.text, self.pos)
        if not m:
            self.error("syntax-error", f"expected identifier, found {self.text[self.pos:self.pos+8]!r}")
        self.pos = m.end()
        return m.group()

    def expect(self, ch: str):
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ch:
            self.error("syntax-error", f"expected {ch!r}")
        self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def term(self) -> Term:
        name = self.ident()
        if self.peek() == "(":
            if not self.sig.is_op(name):
                self.error("undeclared-name", f"unknown operation {name!r}")
            self.expect("(")
            args = []
            if self.peek() != ")":
                args.append(self.term())
                while self.peek() == ",":
                    self.expect(",")
                    args.append(self.term())
            self.expect(")")
            try:
                return self.sig.app(name, *args)
            except TermError as exc:
                self.error("sort-error", str(exc))
        if name in self.vars:
            return Var(name, self.vars[name])
        if self.sig.is_op(name):
            if self.sig.arg_sorts(name):
                self.error("sort-error", f"operation {name!r} needs arguments")
            return self.sig.app(name)
        self.error("undeclared-name", f"unknown name {name!r}")

    def parse_whole(self) -> Term:
        t = self.term()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("syntax-error", f"trailing input {self.text[self.pos:]!r}")
        return t


def _strip(line: str) -> str:
    if "#" in line:
        line = line[: line.index("#")]
    return line.strip()


def parse_presentation(text: str) -> Trs:
    """Parse a ``.lwv`` presentation into a rewrite system."""
    sorts: list[str] = []
    ops: list[tuple[str, tuple[str, ...], str]] = []
    vars_: dict[str, str] = {}
    rule_specs: list[tuple[str, str, int]] = []
    order: list[str] | None = None
    budgets = {"steps": DEFAULT_STEP_BUDGET, "join": DEFAULT_JOIN_BUDGET}

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "sorts":
            names = rest.split()
            if not names:
                raise ParseError("syntax-error", "sorts needs at least one name", lineno)
            sorts.extend(names)
        elif head == "op":
            m = re.fullmatch(r"(\w+)\s*:\s*([\w\s]*)->\s*(\w+)", rest)
            if not m:
                raise ParseError("syntax-error", f"bad op declaration {rest!r}", lineno)
            name, arg_str, result = m.group(1), m.group(2), m.group(3)
            args = tuple(arg_str.split())
            for s in (*args, result):
                if s not in sorts:
                    raise ParseError("undeclared-name", f"sort {s!r} not declared", lineno)
            ops.append((name, args, result))
        elif head == "var":
            m = re.fullmatch(r"([\w\s]+):\s*(\w+)", rest)
            if not m:
                raise ParseError("syntax-error", f"bad var declaration {rest!r}", lineno)
            names, sort = m.group(1).split(), m.group(2)
            if sort not in sorts:
                raise ParseError("undeclared-name", f"sort {sort!r} not declared", lineno)
            for n in names:
                vars_[n] = sort
        elif head == "rule":
            m = re.fullmatch(r"(\w+)\s*:\s*(.+)", rest)
            if not m:
                raise ParseError("syntax-error", f"bad rule {rest!r}", lineno)
            rule_specs.append((m.group(1), m.group(2), lineno))
        elif head == "order":
            order = rest.split()
        elif head == "budget":
            m = re.fullmatch(r"(steps|join)\s+(\d+)", rest)
            if not m:
                raise ParseError("syntax-error", f"bad budget {rest!r}", lineno)
            budgets[m.group(1)] = int(m.group(2))
        else:
            raise ParseError("syntax-error", f"unknown directive {head!r}", lineno)

    try:
        sig = Signature(tuple(sorts), tuple(ops))
    except TermError as exc:
        raise ParseError("sort-error", str(exc), 0) from exc

    rules = []
    for name, body, lineno in rule_specs:
        arrow = body.find("->")
        if arrow < 0:
            raise ParseError("syntax-error", "rule needs ->", lineno)
        lhs_text, rhs_text = body[:arrow].strip(), body[arrow + 2 :].strip()
        lhs = _TermParser(lhs_text, lineno, sig, vars_).parse_whole()
        rhs = _TermParser(rhs_text, lineno, sig, vars_).parse_whole()
        if isinstance(lhs, Var):
            raise ParseError("variable-on-lhs-root", f"rule {name}: left side is a variable", lineno)
        if lhs.sort != rhs.sort:
            raise ParseError("sort-error", f"rule {name}: sides of different sorts", lineno)
        lhs_vars = {v.name for v in variables(lhs)}
        for v in variables(rhs):
            if v.name not in lhs_vars:
                raise ParseError(
                    "rhs-variable-not-in-lhs",
                    f"rule {name}: variable {v.name!r} only on the right", lineno)
        rules.append(Rule(name, lhs, rhs))

    if order is not None:
        by_name = {r.name: r for r in rules}
        unknown = [n for n in order if n not in by_name]
        if unknown:
            raise ParseError("undeclared-name", f"order names unknown rules {unknown}", 0)
        if len(order) != len(rules) or len(set(order)) != len(order):
            raise ParseError("syntax-error", "order must list every rule once", 0)
        rules = [by_name[n] for n in order]

    return Trs(sig, tuple(rules), budgets["steps"], budgets["join"])


def print_presentation(trs: Trs) -> str:
    """Render a system back into ``.lwv`` text (round-trips structurally)."""
    sig = trs.signature
    lines = ["sorts " + " ".join(sig.sorts)]
    for name, args, result in sig.ops:
        arg_str = (" ".join(args) + " ") if args else ""
        lines.append(f"op {name} : {arg_str}-> {result}")
    seen: dict[str, str] = {}
    for rule in trs.rules:
        for v in variables(rule.lhs):
            if v.name not in seen:
                seen[v.name] = v.sort
    for name, sort in seen.items():
        lines.append(f"var {name} : {sort}")
    for rule in trs.rules:
        lines.append(f"rule {rule.name} : {render_term(rule.lhs)} -> {render_term(rule.rhs)}")
    if trs.step_budget != DEFAULT_STEP_BUDGET:
        lines.append(f"budget steps {trs.step_budget}")
    if trs.join_budget != DEFAULT_JOIN_BUDGET:
        lines.append(f"budget join {trs.join_budget}")
    return "\n".join(lines) + "\n"


def parse_srs(text: str) -> Srs:
    """Parse a ``.srs`` string rewriting presentation."""
    letters: list[str] = []
    rules: list[SrsRule] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "letters":
            names = rest.split()
            if not names:
                raise ParseError("syntax-error", "letters needs at least one name", lineno)
            letters.extend(names)
        elif head == "rule":
            m = re.fullmatch(r"(\w+)\s*:\s*(.*)", rest)
            if not m:
                raise ParseError("syntax-error", f"bad rule {rest!r}", lineno)
            name, body = m.group(1), m.group(2)
            arrow = body.find("->")
            if arrow < 0:
                raise ParseError("syntax-error", "rule needs ->", lineno)
            lhs = tuple(body[:arrow].split())
            rhs = tuple(body[arrow + 2 :].split())
            for c in lhs + rhs:
                if c not in letters:
                    raise ParseError("undeclared-name", f"letter {c!r} not declared", lineno)
            if not lhs:
                raise ParseError("syntax-error", f"rule {name}: empty left side", lineno)
            rules.append(SrsRule(name, lhs, rhs))
        else:
            raise ParseError("syntax-error", f"unknown directive {head!r}", lineno)
    return Srs(tuple(letters), tuple(rules))
