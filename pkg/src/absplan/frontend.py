"""S-expression reader, domain/problem parser and pretty-printer.

Grammar (whitespace-insensitive, ``;`` starts a comment)::

    (domain NAME
      (constants (NAME TYPE VALUE) ...)
      (variables (NAME TYPE) ...)          ; TYPE: bool | int | real | (finite S ...) | (set-of S ...)
      (action NAME (pre EXPR ...) (eff (assign VAR EXPR) ...)) ...)

    (problem NAME (init (assign VAR VALUE) ...) (goal EXPR ...))

Stochastic domains use ``probdomain`` as the head and give actions
``(branches (PROB (assign VAR EXPR) ...) ...)`` instead of ``eff``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .model import (
    BOOL,
    BUILTINS,
    INT,
    REAL,
    Action,
    Call,
    Constant,
    Diagnostic,
    Expr,
    ExprTypeError,
    Lit,
    Problem,
    Ref,
    Schema,
    SourceSpan,
    VarType,
    assignable,
    coerce_value,
    fold,
    format_value,
    infer_call_type,
    type_of_value,
    typecheck,
    value_fits,
)
from .stochastic import ProbAction, ProbProblem

MAX_DEPTH = 200
MAX_NUMBER_LENGTH = 64

_SYMBOL = re.compile(rb"[a-zA-Z_][a-zA-Z0-9_-]*\Z")
_INT = re.compile(rb"-?[0-9]+\Z")
_REAL = re.compile(rb"-?[0-9]+\.[0-9]+\Z")
_OPERATORS = {b"=", b"!=", b"<", b"<=", b">", b">=", b"+", b"-", b"*"}
_TOKEN = re.compile(rb"\s+|;[^\n]*|\(|\)|[^\s();]+")

# continuous distributions are recognised only to reject them with a clear message
_DISTRIBUTIONS = {"uniform", "normal", "gaussian", "beta", "gamma", "exponential",
                  "lognormal", "continuous"}
_TYPE_WORDS = {"bool": BOOL, "int": INT, "real": REAL}


class ParseError(Exception):
    """Raised with every diagnostic found; nothing is returned on failure."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


# ---------------------------------------------------------------------------
# Reader
# ---------------------------------------------------------------------------

@dataclass
class Atom:
    text: str
    kind: str  # symbol | int | real | op
    span: SourceSpan


@dataclass
class SList:
    items: list
    span: SourceSpan


class _Source:
    def __init__(self, name: str, data: bytes):
        self.name = name
        self.data = data
        self.line_starts = [0] + [m.end() for m in re.finditer(rb"\n", data)]

    def span(self, start: int, end: int) -> SourceSpan:
        lo, hi = 0, len(self.line_starts) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.line_starts[mid] <= start:
                lo = mid
            else:
                hi = mid - 1
        return SourceSpan(self.name, start, end, lo + 1, start - self.line_starts[lo] + 1)


def read_sexprs(text: str | bytes, name: str, diags: list[Diagnostic]) -> list:
    """Top-level S-expressions of ``text``; problems are appended to ``diags``."""
    if isinstance(text, str):
        data = text.encode("utf-8")
    else:
        data = bytes(text)
        try:
            data.decode("utf-8")
        except UnicodeDecodeError as err:
            src = _Source(name, data)
            diags.append(Diagnostic("lexical", "input is not valid UTF-8",
                                    src.span(err.start, err.end)))
            return []
    src = _Source(name, data)
    stack: list[tuple[list, int]] = []
    top: list = []
    current = top
    for m in _TOKEN.finditer(data):
        tok = m.group()
        start, end = m.span()
        if tok[:1].isspace() or tok[:1] == b";":
            continue
        if tok == b"(":
            if len(stack) >= MAX_DEPTH:
                diags.append(Diagnostic("nesting", f"nesting deeper than {MAX_DEPTH} levels",
                                        src.span(start, end)))
                return []
            stack.append((current, start))
            current = []
            continue
        if tok == b")":
            if not stack:
                diags.append(Diagnostic("paren", "unbalanced ')'", src.span(start, end)))
                continue
            parent, open_at = stack.pop()
            parent.append(SList(current, src.span(open_at, end)))
            current = parent
            continue
        atom = _classify(tok, src.span(start, end), diags)
        if atom is not None:
            current.append(atom)
    while stack:
        parent, open_at = stack.pop()
        diags.append(Diagnostic("paren", "unbalanced '(' (missing ')')", src.span(open_at, open_at + 1)))
        parent.append(SList(current, src.span(open_at, len(data))))
        current = parent
    return top


def _classify(tok: bytes, span: SourceSpan, diags: list[Diagnostic]) -> Atom | None:
    if _SYMBOL.match(tok):
        return Atom(tok.decode("ascii"), "symbol", span)
    if tok in _OPERATORS:
        return Atom(tok.decode("ascii"), "op", span)
    if _INT.match(tok) or _REAL.match(tok):
        if len(tok) > MAX_NUMBER_LENGTH:
            diags.append(Diagnostic("lexical", "numeric literal too long", span))
            return None
        return Atom(tok.decode("ascii"), "int" if _INT.match(tok) else "real", span)
    shown = tok.decode("utf-8", "replace")[:40]
    diags.append(Diagnostic("lexical", f"invalid token '{shown}'", span))
    return None


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _head(node) -> str | None:
    if isinstance(node, SList) and node.items and isinstance(node.items[0], Atom):
        return node.items[0].text
    return None


class _Parser:
    def __init__(self, diags: list[Diagnostic]):
        self.diags = diags
        self.variables: dict[str, VarType] = {}
        self.constants: dict[str, Constant] = {}
        self.symbols: set[str] = set()

    def error(self, code: str, message: str, node) -> None:
        self.diags.append(Diagnostic(code, message, node.span))

    # -- declarations -----------------------------------------------------

    def symbol(self, node, what: str) -> str | None:
        if isinstance(node, Atom) and node.kind == "symbol":
            return node.text
        self.error("syntax", f"expected {what}", node)
        return None

    def parse_type(self, node) -> VarType | None:
        if isinstance(node, Atom):
            if node.text in _TYPE_WORDS:
                return _TYPE_WORDS[node.text]
            self.error("syntax", f"unknown type '{node.text}'", node)
            return None
        head = _head(node)
        if head not in ("finite", "set-of"):
            self.error("syntax", "expected bool, int, real, (finite ...) or (set-of ...)", node)
            return None
        syms = []
        for item in node.items[1:]:
            s = self.symbol(item, "symbol in domain")
            if s is None:
                return None
            if s in syms:
                self.error("domain", f"duplicate symbol '{s}' in domain", item)
                return None
            syms.append(s)
        if not syms:
            self.error("domain", "finite domains and set universes must be non-empty", node)
            return None
        return VarType.finite(*syms) if head == "finite" else VarType.set_of(*syms)

    def parse_value(self, node, vtype: VarType | None):
        """Literal value (for init and constants); None after reporting an error."""
        value = None
        if isinstance(node, Atom):
            if node.kind == "int":
                value = int(node.text)
            elif node.kind == "real":
                value = float(node.text)
            elif node.text in ("true", "false"):
                value = node.text == "true"
            elif node.kind == "symbol":
                value = node.text
        elif _head(node) == "set":
            members = []
            for item in node.items[1:]:
                s = self.symbol(item, "set element symbol")
                if s is None:
                    return None
                members.append(s)
            value = frozenset(members)
        if value is None:
            self.error("syntax", "expected a literal value", node)
            return None
        if vtype is not None:
            value = coerce_value(vtype, value)
            if not value_fits(vtype, value):
                self.error("type", f"value {format_value(value)} does not fit type {vtype}", node)
                return None
        return value

    def declare(self, name: str, node) -> bool:
        if name in self.variables or name in self.constants:
            self.error("duplicate", f"'{name}' declared twice", node)
            return False
        if name in ("true", "false") or name in BUILTINS:
            self.error("syntax", f"'{name}' is reserved", node)
            return False
        return True

    def parse_constants(self, section: SList) -> None:
        for decl in section.items[1:]:
            if not isinstance(decl, SList) or len(decl.items) != 3:
                self.error("syntax", "expected (NAME TYPE VALUE)", decl)
                continue
            name = self.symbol(decl.items[0], "constant name")
            vtype = self.parse_type(decl.items[1])
            if name is None or vtype is None:
                continue
            value = self.parse_value(decl.items[2], vtype)
            if value is not None and self.declare(name, decl):
                self.constants[name] = Constant(vtype, value)
                self._note_symbols(vtype)

    def parse_variables(self, section: SList) -> None:
        for decl in section.items[1:]:
            if not isinstance(decl, SList) or len(decl.items) != 2:
                self.error("syntax", "expected (NAME TYPE)", decl)
                continue
            name = self.symbol(decl.items[0], "variable name")
            vtype = self.parse_type(decl.items[1])
            if name is not None and vtype is not None and self.declare(name, decl):
                self.variables[name] = vtype
                self._note_symbols(vtype)

    def _note_symbols(self, vtype: VarType) -> None:
        self.symbols.update(vtype.symbols)

    # -- expressions ------------------------------------------------------

    def expr(self, node) -> Expr | None:
        if isinstance(node, Atom):
            return self.atom_expr(node)
        if not node.items:
            self.error("syntax", "empty expression '()'", node)
            return None
        head = node.items[0]
        if not isinstance(head, Atom) or head.kind not in ("symbol", "op"):
            self.error("syntax", "expected a function symbol", node)
            return None
        fn = head.text
        if fn == "set":
            value = self.parse_value(node, None)
            return None if value is None else Lit(value, type_of_value(value), node.span)
        if fn in _DISTRIBUTIONS:
            self.error("continuous-distribution",
                       f"continuous distribution '{fn}' is not supported; use discrete branches", node)
            return None
        if fn not in BUILTINS:
            self.error("unknown-function", f"unknown function symbol '{fn}'", head)
            return None
        args = [self.expr(a) for a in node.items[1:]]
        if any(a is None for a in args):
            return None
        try:
            vtype = infer_call_type(fn, tuple(a.type for a in args))
        except ExprTypeError as err:
            self.error(err.code, err.message, node)
            return None
        return fold(Call(fn, tuple(args), vtype, node.span))

    def atom_expr(self, node: Atom) -> Expr | None:
        if node.kind == "int":
            return Lit(int(node.text), INT, node.span)
        if node.kind == "real":
            value = float(node.text)
            return Lit(value, REAL, node.span)
        if node.kind == "op":
            self.error("syntax", f"operator '{node.text}' used as a value", node)
            return None
        name = node.text
        if name in ("true", "false"):
            return Lit(name == "true", BOOL, node.span)
        if name in self.variables:
            return Ref(name, self.variables[name], node.span)
        if name in self.constants:
            return Ref(name, self.constants[name].type, node.span)
        if name in self.symbols:
            return Lit(name, VarType.finite(name), node.span)
        self.error("unknown-variable", f"unknown variable or symbol '{name}'", node)
        return None

    def condition(self, node: SList) -> list[Expr] | None:
        """Conjuncts of a (pre ...) / (goal ...) section, flattening top-level 'and'."""
        out: list[Expr] = []
        ok = True
        pending = list(node.items[1:])
        while pending:
            item = pending.pop(0)
            if _head(item) == "and":
                pending[0:0] = item.items[1:]
                continue
            if _head(item) in ("or", "not"):
                self.error("connective", f"'{_head(item)}' is not allowed in conditions; "
                           "only conjunctions of atomic predicates are supported", item)
                ok = False
                continue
            e = self.expr(item)
            if e is None:
                ok = False
                continue
            if e.type.kind != "bool":
                self.error("type", "condition must be boolean", item)
                ok = False
                continue
            out.append(e)
        return out if ok else None

    def effects(self, items: list) -> list[tuple[str, Expr]] | None:
        out = []
        ok = True
        for item in items:
            if _head(item) != "assign" or len(item.items) != 3:
                self.error("syntax", "expected (assign VAR EXPR)", item)
                ok = False
                continue
            target = self.symbol(item.items[1], "assigned variable")
            rhs = self.expr(item.items[2])
            if target is None or rhs is None:
                ok = False
                continue
            if target in self.constants:
                self.error("constant", f"assignment to constant '{target}'", item.items[1])
                ok = False
                continue
            if target not in self.variables:
                self.error("unknown-variable", f"unknown variable '{target}'", item.items[1])
                ok = False
                continue
            vtype = self.variables[target]
            if not assignable(vtype, rhs.type):
                self.error("type", f"cannot assign {rhs.type} expression to '{target}' of type {vtype}",
                           item.items[2])
                ok = False
                continue
            if any(t == target for t, _ in out):
                self.error("conflict", f"conflicting assignment to '{target}'", item)
                ok = False
                continue
            out.append((target, rhs))
        return out if ok else None

    def action(self, node: SList, probabilistic: bool):
        items = node.items
        name = self.symbol(items[1], "action name") if len(items) > 1 else None
        if name is None:
            if len(items) <= 1:
                self.error("syntax", "action needs a name", node)
            return None
        pre: list[Expr] | None = []
        effects = None
        branches = None
        for section in items[2:]:
            head = _head(section)
            if head == "pre":
                pre = self.condition(section)
            elif head == "eff" and not probabilistic:
                effects = self.effects(section.items[1:])
            elif head == "branches" and probabilistic:
                branches = self.branches(section)
            else:
                expected = "(pre ...) or (branches ...)" if probabilistic else "(pre ...) or (eff ...)"
                self.error("syntax", f"expected {expected} in action '{name}'", section)
                return None
        if pre is None:
            return None
        if probabilistic:
            if branches is None:
                return None
            return ProbAction(name, tuple(pre), tuple(branches))
        if effects is None:
            if not any(_head(s) == "eff" for s in items[2:]):
                effects = []
            else:
                return None
        return Action(name, tuple(pre), tuple(effects))

    def branches(self, section: SList):
        out = []
        ok = True
        for branch in section.items[1:]:
            head = _head(branch)
            if head in _DISTRIBUTIONS:
                self.error("continuous-distribution",
                           f"continuous distribution '{head}' is not supported", branch)
                ok = False
                continue
            if (not isinstance(branch, SList) or not branch.items
                    or not isinstance(branch.items[0], Atom)
                    or branch.items[0].kind not in ("int", "real")):
                self.error("syntax", "expected (PROBABILITY (assign ...) ...)", branch)
                ok = False
                continue
            prob = float(branch.items[0].text)
            if not 0 < prob <= 1:
                self.error("probability", "branch probability must lie in (0, 1]", branch.items[0])
                ok = False
                continue
            effects = self.effects(branch.items[1:])
            if effects is None:
                ok = False
                continue
            out.append((prob, tuple(effects)))
        if ok and not out:
            self.error("probability", "an action needs at least one branch", section)
            return None
        if ok and abs(sum(p for p, _ in out) - 1.0) > 1e-9:
            self.error("probability", "branch probabilities must sum to 1", section)
            return None
        return out if ok else None


def _parse_domain(nodes: list, p: _Parser, source_name: str, diags: list[Diagnostic]):
    if len(nodes) != 1 or _head(nodes[0]) not in ("domain", "probdomain"):
        where = nodes[0].span if nodes else SourceSpan(source_name, 0, 0, 1, 1)
        diags.append(Diagnostic("syntax", "expected a single (domain NAME ...) form", where))
        return None
    root = nodes[0]
    probabilistic = _head(root) == "probdomain"
    name = p.symbol(root.items[1], "domain name") if len(root.items) > 1 else None
    if name is None:
        if len(root.items) <= 1:
            p.error("syntax", "domain needs a name", root)
        return None
    sections = root.items[2:]
    for sec in sections:
        if _head(sec) == "constants":
            p.parse_constants(sec)
    for sec in sections:
        if _head(sec) == "variables":
            p.parse_variables(sec)
    actions = []
    for sec in sections:
        head = _head(sec)
        if head == "action":
            a = p.action(sec, probabilistic)
            if a is not None:
                actions.append(a)
        elif head not in ("constants", "variables"):
            p.error("syntax", "expected (constants ...), (variables ...) or (action ...)", sec)
    return name, probabilistic, actions


def _parse_problem_form(nodes: list, p: _Parser, source_name: str, diags: list[Diagnostic]):
    if len(nodes) != 1 or _head(nodes[0]) != "problem":
        where = nodes[0].span if nodes else SourceSpan(source_name, 0, 0, 1, 1)
        diags.append(Diagnostic("syntax", "expected a single (problem NAME ...) form", where))
        return None
    root = nodes[0]
    name = p.symbol(root.items[1], "problem name") if len(root.items) > 1 else None
    if name is None:
        if len(root.items) <= 1:
            p.error("syntax", "problem needs a name", root)
        return None
    init: dict = {}
    goal: list[Expr] | None = []
    ok = True
    for sec in root.items[2:]:
        head = _head(sec)
        if head == "init":
            for item in sec.items[1:]:
                if _head(item) != "assign" or len(item.items) != 3:
                    p.error("syntax", "expected (assign VAR VALUE)", item)
                    ok = False
                    continue
                var = p.symbol(item.items[1], "variable name")
                if var is None:
                    ok = False
                    continue
                if var not in p.variables:
                    p.error("unknown-variable", f"unknown variable '{var}'", item.items[1])
                    ok = False
                    continue
                if var in init:
                    p.error("init", f"'{var}' initialised twice", item)
                    ok = False
                    continue
                value = p.parse_value(item.items[2], p.variables[var])
                if value is None:
                    ok = False
                    continue
                init[var] = value
        elif head == "goal":
            goal = p.condition(sec)
        else:
            p.error("syntax", "expected (init ...) or (goal ...)", sec)
            ok = False
    missing = [v for v in p.variables if v not in init]
    if missing:
        p.error("init", f"no initial value for: {', '.join(missing)}", root)
        ok = False
    if goal is None or not ok:
        return None
    return name, init, goal


def parse_problem(domain_text: str | bytes, problem_text: str | bytes,
                  domain_name: str = "<domain>", problem_name: str = "<problem>") -> Problem:
    """Parse and typecheck a domain/problem pair.

    Returns a Problem (a ProbProblem for ``probdomain`` input). Raises
    ParseError carrying every diagnostic found otherwise.
    """
    diags: list[Diagnostic] = []
    dom_nodes = read_sexprs(domain_text, domain_name, diags)
    prob_nodes = read_sexprs(problem_text, problem_name, diags)
    if diags:
        raise ParseError(diags)
    p = _Parser(diags)
    dom = _parse_domain(dom_nodes, p, domain_name, diags)
    prob = _parse_problem_form(prob_nodes, p, problem_name, diags)
    if diags or dom is None or prob is None:
        raise ParseError(diags or [Diagnostic("syntax", "could not parse input")])
    dname, probabilistic, actions = dom
    pname, init, goal = prob
    schema = Schema(p.variables, p.constants)
    cls = ProbProblem if probabilistic else Problem
    problem = cls(pname, dict(p.variables), dict(p.constants), tuple(actions),
                  schema.state(init), tuple(goal), dname, schema)
    problems = typecheck(problem)
    if problems:
        raise ParseError(problems)
    return problem


# ---------------------------------------------------------------------------
# Pretty-printing
# ---------------------------------------------------------------------------

def _assign(target: str, rhs: Expr) -> str:
    return f"(assign {target} {rhs})"


def format_domain(problem: Problem) -> str:
    head = "probdomain" if isinstance(problem, ProbProblem) else "domain"
    lines = [f"({head} {problem.domain}"]
    if problem.constants:
        lines.append("  (constants")
        for name, (vtype, value) in problem.constants.items():
            lines.append(f"    ({name} {vtype} {format_value(value)})")
        lines[-1] += ")"
    if problem.variables:
        lines.append("  (variables")
        for name, vtype in problem.variables.items():
            lines.append(f"    ({name} {vtype})")
        lines[-1] += ")"
    for action in problem.actions:
        lines.append(f"  (action {action.name}")
        lines.append("    (pre" + "".join(f" {c}" for c in action.pre) + ")")
        if isinstance(action, ProbAction):
            parts = []
            for prob, effects in action.branches:
                body = "".join(" " + _assign(t, e) for t, e in effects)
                parts.append(f"      ({format_value(float(prob))}{body})")
            lines.append("    (branches\n" + "\n".join(parts) + "))")
        else:
            lines.append("    (eff" + "".join(" " + _assign(t, e) for t, e in action.effects) + "))")
    lines[-1] += ")"
    return "\n".join(lines) + "\n"


def format_problem(problem: Problem) -> str:
    lines = [f"(problem {problem.name}", "  (init"]
    for name, value in problem.init.items():
        lines.append(f"    (assign {name} {format_value(value)})")
    lines[-1] += ")"
    lines.append("  (goal" + "".join(f" {g}" for g in problem.goal) + "))")
    return "\n".join(lines) + "\n"
