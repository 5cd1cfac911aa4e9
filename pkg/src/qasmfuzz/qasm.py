"""QASM 2.0 subset: AST types, parser, printer, and validator.

The dialect covers the OPENQASM 2.0 prologue, ``include`` lines, quantum and
classical register declarations, custom gate definitions whose bodies use
builtin gates only, builtin gate applications with indexed operands, and
``barrier`` statements.  Angle expressions support ``+ - * /``, unary minus,
``pi``, and numeric literals.

Parsing is strict by default: any violation of the structural rules (unknown
gates, arity mismatches, bad register references) raises :class:`ParseError`
carrying a position and a bare, position-free message.  ``strict=False``
keeps the syntax checks but skips the semantic ones, which is what the
reducer uses to manipulate deliberately broken programs.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .gates import BARRIER, BUILTIN_GATES, GATE_SIGNATURES


class ParseError(Exception):
    """Syntax or semantic error, annotated with a 1-based line and column.

    ``message`` holds the bare text (no position); ``str()`` prepends the
    position.  Adapters report the bare message so that error identity is
    stable under statement-level reduction.
    """

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# Angle expressions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float
    is_int: bool = False

    def eval(self, env: dict[str, float]) -> float:
        return self.value

    def token(self) -> str:
        return _format_decimal(self.value) if not self.is_int else str(int(self.value))


@dataclass(frozen=True)
class Pi:
    def eval(self, env: dict[str, float]) -> float:
        return math.pi

    def token(self) -> str:
        return "pi"


@dataclass(frozen=True)
class Name:
    ident: str

    def eval(self, env: dict[str, float]) -> float:
        return env[self.ident]

    def token(self) -> str:
        return self.ident


@dataclass(frozen=True)
class Neg:
    operand: "Expr"

    def eval(self, env: dict[str, float]) -> float:
        return -self.operand.eval(env)

    def token(self) -> str:
        inner = self.operand.token()
        if isinstance(self.operand, Bin):
            inner = f"({inner})"
        return f"-{inner}"


@dataclass(frozen=True)
class Bin:
    op: str  # one of + - * /
    left: "Expr"
    right: "Expr"

    def eval(self, env: dict[str, float]) -> float:
        a = self.left.eval(env)
        b = self.right.eval(env)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        return a / b

    def token(self) -> str:
        lp = self.left.token()
        rp = self.right.token()
        if self.op in "*/":
            if isinstance(self.left, Bin) and self.left.op in "+-":
                lp = f"({lp})"
            if isinstance(self.right, (Bin, Neg)):
                rp = f"({rp})"
        elif isinstance(self.right, (Bin, Neg)):
            rp = f"({rp})"
        return f"{lp}{self.op}{rp}"


Expr = Num | Pi | Name | Neg | Bin


def _format_decimal(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


# Display forms for evaluated angle parameters.


@dataclass(frozen=True)
class PiRational:
    """value == (num * pi) / den, printed as a rational-pi token."""

    num: int
    den: int


@dataclass(frozen=True)
class PiMultiple:
    """value == coeff * pi, printed as '<coeff>*pi'."""

    coeff: float


@dataclass(frozen=True)
class DecimalLit:
    """Printed as a plain decimal literal of the value."""


_MAX_RATIONAL_NUM = 32
_MAX_RATIONAL_DEN = 16


@dataclass(frozen=True)
class ParamExpr:
    """A fully evaluated angle with a committed display form.

    The display form is chosen so that printing the token and re-parsing it
    reproduces the exact same double-precision value.
    """

    value: float
    display: PiRational | PiMultiple | DecimalLit

    @classmethod
    def from_value(cls, v: float) -> "ParamExpr":
        v = float(v) + 0.0  # normalize -0.0
        if v == 0.0:
            return cls(0.0, DecimalLit())
        rat = _recognize_rational(v)
        if rat is not None:
            return cls(v, rat)
        m = v / math.pi
        if m * math.pi == v:
            return cls(v, PiMultiple(m))
        return cls(v, DecimalLit())

    @classmethod
    def from_pi_multiple(cls, coeff: float) -> "ParamExpr":
        v = coeff * math.pi + 0.0
        if v == 0.0:
            return cls(0.0, DecimalLit())
        rat = _recognize_rational(v)
        if rat is not None:
            return cls(v, rat)
        return cls(v, PiMultiple(coeff))

    def token(self) -> str:
        d = self.display
        if isinstance(d, PiRational):
            num, den = d.num, d.den
            if den == 1:
                if num == 1:
                    return "pi"
                if num == -1:
                    return "-pi"
                return f"{num}*pi"
            if num == 1:
                return f"pi/{den}"
            if num == -1:
                return f"-pi/{den}"
            return f"{num}*pi/{den}"
        if isinstance(d, PiMultiple):
            return f"{d.coeff!r}*pi"
        return _format_decimal(self.value)


def _recognize_rational(v: float) -> PiRational | None:
    # The largest representable rational is MAX_NUM*pi; anything bigger in
    # magnitude (or non-finite) cannot match, and would overflow round().
    if not math.isfinite(v) or abs(v) > (_MAX_RATIONAL_NUM + 1) * math.pi:
        return None
    for den in range(1, _MAX_RATIONAL_DEN + 1):
        num = round(v * den / math.pi)
        if num == 0 or abs(num) > _MAX_RATIONAL_NUM:
            continue
        if (num * math.pi) / den == v:
            return PiRational(num, den)
    return None


def _expr_to_param(expr: Expr, line: int, col: int) -> ParamExpr:
    """Evaluate a closed expression and commit a display form.

    Canonical shapes keep their spelling (``pi/2``, ``3*pi/4``,
    ``1.25*pi``, bare decimals); anything else falls back to value-based
    recognition.
    """
    try:
        value = expr.eval({})
    except KeyError as e:
        raise ParseError(f"'{e.args[0]}' is not defined in this scope", line, col) from None
    if not math.isfinite(value):
        raise ParseError("angle expression is not finite", line, col)
    value = value + 0.0

    shape = _match_pi_shape(expr)
    if shape is not None:
        kind, payload = shape
        if kind == "rational":
            num, den = payload
            g = math.gcd(abs(num), den)
            num, den = num // g, den // g
            if (
                0 < den <= _MAX_RATIONAL_DEN
                and num != 0
                and abs(num) <= _MAX_RATIONAL_NUM
                and (num * math.pi) / den == value
            ):
                return ParamExpr(value, PiRational(num, den))
        elif kind == "multiple":
            if payload * math.pi == value and value != 0.0:
                return ParamExpr(value, PiMultiple(payload))
        elif kind == "decimal":
            return ParamExpr(value, DecimalLit())
    return ParamExpr.from_value(value)


def _match_pi_shape(expr: Expr):
    """Match the display shapes the printer emits; return None otherwise."""
    neg = False
    if isinstance(expr, Neg):
        neg, expr = True, expr.operand
    sign = -1 if neg else 1
    if isinstance(expr, Num):
        return ("decimal", None)
    if isinstance(expr, Pi):
        return ("rational", (sign, 1))
    if isinstance(expr, Bin) and expr.op == "/" and isinstance(expr.right, Num) and expr.right.is_int:
        den = int(expr.right.value)
        if den <= 0:
            return None
        top = expr.left
        if isinstance(top, Pi):
            return ("rational", (sign, den))
        if (
            isinstance(top, Bin)
            and top.op == "*"
            and isinstance(top.left, Num)
            and top.left.is_int
            and isinstance(top.right, Pi)
        ):
            return ("rational", (sign * int(top.left.value), den))
        return None
    if isinstance(expr, Bin) and expr.op == "*" and isinstance(expr.right, Pi) and isinstance(expr.left, Num):
        if expr.left.is_int:
            return ("rational", (sign * int(expr.left.value), 1))
        return ("multiple", sign * expr.left.value)
    return None


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

Operand = tuple[str, int]  # (register name, index)


@dataclass(frozen=True)
class QasmStatement:
    """A builtin or custom gate application, or a barrier."""

    gate_name: str
    params: tuple[ParamExpr, ...]
    operands: tuple[Operand, ...]
    line: int | None = field(default=None, compare=False)


@dataclass(frozen=True)
class GateBodyStatement:
    """A statement inside a gate definition: builtin gate over bare args."""

    gate_name: str
    params: tuple[Expr, ...]
    operands: tuple[str, ...]


@dataclass(frozen=True)
class GateDef:
    name: str
    params: tuple[str, ...]
    args: tuple[str, ...]
    body: tuple[GateBodyStatement, ...]


@dataclass(frozen=True)
class QasmProgram:
    version: str
    includes: tuple[str, ...]
    gate_defs: tuple[GateDef, ...]
    qregs: tuple[tuple[str, int], ...]
    cregs: tuple[tuple[str, int], ...]
    statements: tuple[QasmStatement, ...]

    def gate_def(self, name: str) -> GateDef | None:
        for gd in self.gate_defs:
            if gd.name == name:
                return gd
        return None


def gate_statement_count(program: QasmProgram) -> int:
    """Number of gate applications, barriers excluded."""
    return sum(1 for s in program.statements if s.gate_name != BARRIER)


def unique_gate_names(program: QasmProgram) -> set[str]:
    return {s.gate_name for s in program.statements if s.gate_name != BARRIER}


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>[ \t\r]+)
    | (?P<nl>\n)
    | (?P<comment>//[^\n]*)
    | (?P<number>(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?)
    | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<string>"[^"\n]*")
    | (?P<sym>[;,()\[\]{}+\-*/])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # number | id | string | sym | eof
    text: str
    line: int
    col: int


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    line = 1
    line_start = 0
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(_Token(kind, text, line, pos - line_start + 1))
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[_Token], strict: bool):
        self.tokens = tokens
        self.pos = 0
        self.strict = strict

    # -- token plumbing ----------------------------------------------------

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str, tok: _Token | None = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(message, tok.line, tok.col)

    def expect_sym(self, sym: str) -> _Token:
        tok = self.next()
        if tok.kind != "sym" or tok.text != sym:
            raise self.error(f"expected '{sym}' but found {tok.text!r}", tok)
        return tok

    def expect_id(self, what: str = "identifier") -> _Token:
        tok = self.next()
        if tok.kind != "id":
            raise self.error(f"expected {what} but found {tok.text!r}", tok)
        return tok

    def at_sym(self, sym: str) -> bool:
        tok = self.peek()
        return tok.kind == "sym" and tok.text == sym

    def expect_int(self, what: str) -> int:
        tok = self.next()
        if tok.kind != "number" or "." in tok.text or "e" in tok.text or "E" in tok.text:
            raise self.error(f"expected {what} but found {tok.text!r}", tok)
        return int(tok.text)

    # -- grammar -----------------------------------------------------------

    def parse_program(self) -> QasmProgram:
        head = self.expect_id("'OPENQASM'")
        if head.text != "OPENQASM":
            raise self.error("expected 'OPENQASM' header", head)
        version_tok = self.next()
        if version_tok.kind != "number":
            raise self.error("expected version number after OPENQASM", version_tok)
        if version_tok.text != "2.0":
            raise self.error(f"unsupported OPENQASM version '{version_tok.text}'", version_tok)
        self.expect_sym(";")

        includes: list[str] = []
        gate_defs: list[GateDef] = []
        qregs: list[tuple[str, int]] = []
        cregs: list[tuple[str, int]] = []
        statements: list[QasmStatement] = []
        reg_kinds: dict[str, tuple[str, int]] = {}  # name -> (kind, size)
        def_names: dict[str, GateDef] = {}

        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind == "id" and tok.text == "include":
                self.next()
                s = self.next()
                if s.kind != "string":
                    raise self.error("expected file string after include", s)
                self.expect_sym(";")
                includes.append(s.text[1:-1])
            elif tok.kind == "id" and tok.text in ("qreg", "creg"):
                kind = self.next().text
                name_tok = self.expect_id("register name")
                self.expect_sym("[")
                size = self.expect_int("register size")
                self.expect_sym("]")
                self.expect_sym(";")
                if self.strict and name_tok.text in reg_kinds:
                    raise self.error(f"duplicate register name '{name_tok.text}'", name_tok)
                if self.strict and kind == "qreg" and size < 1:
                    raise self.error(f"qreg '{name_tok.text}' must have positive size", name_tok)
                reg_kinds[name_tok.text] = (kind, size)
                (qregs if kind == "qreg" else cregs).append((name_tok.text, size))
            elif tok.kind == "id" and tok.text == "gate":
                gd = self.parse_gate_def(def_names)
                gate_defs.append(gd)
                def_names[gd.name] = gd
            else:
                statements.append(self.parse_statement(reg_kinds, def_names))
        return QasmProgram(
            version="2.0",
            includes=tuple(includes),
            gate_defs=tuple(gate_defs),
            qregs=tuple(qregs),
            cregs=tuple(cregs),
            statements=tuple(statements),
        )

    def parse_gate_def(self, def_names: dict[str, GateDef]) -> GateDef:
        self.next()  # 'gate'
        name_tok = self.expect_id("gate name")
        name = name_tok.text
        if self.strict and name in BUILTIN_GATES:
            raise self.error(f"gate '{name}' redefines a builtin gate", name_tok)
        if self.strict and name in def_names:
            raise self.error(f"duplicate gate definition '{name}'", name_tok)

        params: list[str] = []
        if self.at_sym("("):
            self.next()
            if not self.at_sym(")"):
                params.append(self.expect_id("parameter name").text)
                while self.at_sym(","):
                    self.next()
                    params.append(self.expect_id("parameter name").text)
            self.expect_sym(")")
        args = [self.expect_id("gate argument").text]
        while self.at_sym(","):
            self.next()
            args.append(self.expect_id("gate argument").text)
        if self.strict and (len(set(params)) != len(params) or len(set(args)) != len(args)):
            raise self.error(f"duplicate name in signature of gate '{name}'", name_tok)
        self.expect_sym("{")
        body: list[GateBodyStatement] = []
        while not self.at_sym("}"):
            body.append(self.parse_body_statement(name, params, args))
        self.expect_sym("}")
        return GateDef(name=name, params=tuple(params), args=tuple(args), body=tuple(body))

    def parse_body_statement(
        self, owner: str, params: list[str], args: list[str]
    ) -> GateBodyStatement:
        gname_tok = self.expect_id("gate name")
        gname = gname_tok.text
        if self.strict and gname not in BUILTIN_GATES and gname != BARRIER:
            raise self.error(
                f"gate definition '{owner}' may only reference builtin gates", gname_tok
            )
        exprs: list[Expr] = []
        if self.at_sym("("):
            self.next()
            if not self.at_sym(")"):
                exprs.append(self.parse_expr())
                while self.at_sym(","):
                    self.next()
                    exprs.append(self.parse_expr())
            self.expect_sym(")")
        operands = [self.expect_id("gate argument").text]
        while self.at_sym(","):
            self.next()
            operands.append(self.expect_id("gate argument").text)
        self.expect_sym(";")
        if self.strict:
            if gname != BARRIER:
                n_par, n_q = GATE_SIGNATURES[gname]
                if len(exprs) != n_par:
                    raise self.error(
                        f"'{gname}' takes {n_par} parameters but {len(exprs)} were given",
                        gname_tok,
                    )
                if len(operands) != n_q:
                    raise self.error(
                        f"'{gname}' takes {n_q} qubit arguments but {len(operands)} were given",
                        gname_tok,
                    )
            for q in operands:
                if q not in args:
                    raise self.error(f"'{q}' is not an argument of gate '{owner}'", gname_tok)
            if len(set(operands)) != len(operands):
                raise self.error(f"repeated qubit operand in '{gname}'", gname_tok)
            for e in exprs:
                _check_expr_names(e, set(params), self, gname_tok, owner)
        return GateBodyStatement(gate_name=gname, params=tuple(exprs), operands=tuple(operands))

    def parse_statement(
        self, reg_kinds: dict[str, tuple[str, int]], def_names: dict[str, GateDef]
    ) -> QasmStatement:
        gname_tok = self.expect_id("gate name")
        gname = gname_tok.text
        is_barrier = gname == BARRIER

        if self.strict and not is_barrier:
            if gname not in BUILTIN_GATES and gname not in def_names:
                raise self.error(f"'{gname}' is not defined in this scope", gname_tok)

        params: list[ParamExpr] = []
        if self.at_sym("("):
            self.next()
            if not self.at_sym(")"):
                params.append(self.parse_param(gname_tok))
                while self.at_sym(","):
                    self.next()
                    params.append(self.parse_param(gname_tok))
            self.expect_sym(")")

        operands: list[Operand] = [self.parse_operand(reg_kinds)]
        while self.at_sym(","):
            self.next()
            operands.append(self.parse_operand(reg_kinds))
        self.expect_sym(";")

        if self.strict:
            if is_barrier:
                if params:
                    raise self.error("barrier takes no parameters", gname_tok)
            else:
                if gname in BUILTIN_GATES:
                    n_par, n_q = GATE_SIGNATURES[gname]
                else:
                    gd = def_names[gname]
                    n_par, n_q = len(gd.params), len(gd.args)
                if len(params) != n_par:
                    raise self.error(
                        f"'{gname}' takes {n_par} parameters but {len(params)} were given",
                        gname_tok,
                    )
                if len(operands) != n_q:
                    raise self.error(
                        f"'{gname}' takes {n_q} qubit arguments but {len(operands)} were given",
                        gname_tok,
                    )
            if len(set(operands)) != len(operands):
                raise self.error(f"repeated qubit operand in '{gname}'", gname_tok)
        return QasmStatement(
            gate_name=gname,
            params=tuple(params),
            operands=tuple(operands),
            line=gname_tok.line,
        )

    def parse_operand(self, reg_kinds: dict[str, tuple[str, int]]) -> Operand:
        reg_tok = self.expect_id("register name")
        self.expect_sym("[")
        idx_tok = self.peek()
        idx = self.expect_int("qubit index")
        self.expect_sym("]")
        if self.strict:
            if reg_tok.text not in reg_kinds:
                raise self.error(f"'{reg_tok.text}' is not a declared register", reg_tok)
            kind, size = reg_kinds[reg_tok.text]
            if kind != "qreg":
                raise self.error(f"'{reg_tok.text}' is not a quantum register", reg_tok)
            if idx >= size:
                raise self.error(
                    f"qubit index {idx} out of range for register '{reg_tok.text}' of size {size}",
                    idx_tok,
                )
        return (reg_tok.text, idx)

    def parse_param(self, at: _Token) -> ParamExpr:
        expr = self.parse_expr()
        return _expr_to_param(expr, at.line, at.col)

    # Expression grammar: additive over multiplicative over unary/atom.

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while self.peek().kind == "sym" and self.peek().text in "+-":
            op = self.next().text
            node = Bin(op, node, self.parse_term())
        return node

    def parse_term(self) -> Expr:
        node = self.parse_factor()
        while self.peek().kind == "sym" and self.peek().text in "*/":
            op = self.next().text
            node = Bin(op, node, self.parse_factor())
        return node

    def parse_factor(self) -> Expr:
        tok = self.peek()
        if tok.kind == "sym" and tok.text == "-":
            self.next()
            return Neg(self.parse_factor())
        if tok.kind == "sym" and tok.text == "(":
            self.next()
            node = self.parse_expr()
            self.expect_sym(")")
            return node
        if tok.kind == "number":
            self.next()
            is_int = "." not in tok.text and "e" not in tok.text and "E" not in tok.text
            return Num(float(tok.text), is_int)
        if tok.kind == "id":
            self.next()
            if tok.text == "pi":
                return Pi()
            return Name(tok.text)
        raise self.error(f"expected expression but found {tok.text!r}", tok)


def _check_expr_names(e: Expr, allowed: set[str], parser: _Parser, tok: _Token, owner: str):
    if isinstance(e, Name):
        if e.ident not in allowed:
            raise parser.error(f"'{e.ident}' is not a parameter of gate '{owner}'", tok)
    elif isinstance(e, Neg):
        _check_expr_names(e.operand, allowed, parser, tok, owner)
    elif isinstance(e, Bin):
        _check_expr_names(e.left, allowed, parser, tok, owner)
        _check_expr_names(e.right, allowed, parser, tok, owner)


def parse(source: str, strict: bool = True) -> QasmProgram:
    """Parse QASM text into a program AST.

    Strict mode enforces every structural rule and raises ParseError on the
    first violation; lenient mode checks syntax only.
    """
    return _Parser(_tokenize(source), strict).parse_program()


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------


def print_statement(stmt: QasmStatement) -> str:
    params = ""
    if stmt.params:
        params = "(" + ",".join(p.token() for p in stmt.params) + ")"
    operands = ",".join(f"{r}[{i}]" for r, i in stmt.operands)
    return f"{stmt.gate_name}{params} {operands};"


def _print_body_statement(stmt: GateBodyStatement) -> str:
    params = ""
    if stmt.params:
        params = "(" + ",".join(e.token() for e in stmt.params) + ")"
    return f"{stmt.gate_name}{params} {','.join(stmt.operands)};"


def print_program(program: QasmProgram) -> str:
    """Render a program to canonical text: one statement per line, prologue
    first, then gate definitions, register declarations, and statements."""
    lines = [f"OPENQASM {program.version};"]
    for inc in program.includes:
        lines.append(f'include "{inc}";')
    for gd in program.gate_defs:
        params = f"({','.join(gd.params)})" if gd.params else ""
        lines.append(f"gate {gd.name}{params} {','.join(gd.args)} {{")
        for b in gd.body:
            lines.append("  " + _print_body_statement(b))
        lines.append("}")
    for name, size in program.qregs:
        lines.append(f"qreg {name}[{size}];")
    for name, size in program.cregs:
        lines.append(f"creg {name}[{size}];")
    for stmt in program.statements:
        lines.append(print_statement(stmt))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Validator
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    """One broken rule; statement_index is None for declaration-level rules."""

    statement_index: int | None
    rule: str
    detail: str

    def __str__(self) -> str:
        where = "declarations" if self.statement_index is None else f"statement {self.statement_index}"
        return f"{where}: {self.rule} ({self.detail})"


def validate(program: QasmProgram) -> list[Violation]:
    """Check every structural rule over an AST; returns all violations."""
    out: list[Violation] = []
    reg_kinds: dict[str, tuple[str, int]] = {}
    for kind, regs in (("qreg", program.qregs), ("creg", program.cregs)):
        for name, size in regs:
            if name in reg_kinds:
                out.append(Violation(None, "duplicate register name", name))
            reg_kinds[name] = (kind, size)
            if kind == "qreg" and size < 1:
                out.append(Violation(None, "qreg size must be positive", f"{name}[{size}]"))
            if kind == "creg" and size < 0:
                out.append(Violation(None, "creg size must be non-negative", f"{name}[{size}]"))

    defs: dict[str, GateDef] = {}
    for gd in program.gate_defs:
        if gd.name in BUILTIN_GATES:
            out.append(Violation(None, "gate redefines builtin", gd.name))
        if gd.name in defs:
            out.append(Violation(None, "duplicate gate definition", gd.name))
        defs[gd.name] = gd
        if len(set(gd.params)) != len(gd.params) or len(set(gd.args)) != len(gd.args):
            out.append(Violation(None, "duplicate name in gate signature", gd.name))
        for b in gd.body:
            if b.gate_name == BARRIER:
                continue
            if b.gate_name not in BUILTIN_GATES:
                out.append(Violation(None, "non-builtin gate in definition body", b.gate_name))
                continue
            n_par, n_q = GATE_SIGNATURES[b.gate_name]
            if len(b.params) != n_par:
                out.append(Violation(None, "parameter count mismatch", f"{gd.name}: {b.gate_name}"))
            if len(b.operands) != n_q:
                out.append(
                    Violation(None, "qubit argument count mismatch", f"{gd.name}: {b.gate_name}")
                )
            for q in b.operands:
                if q not in gd.args:
                    out.append(Violation(None, "unknown gate argument", f"{gd.name}: {q}"))
            if len(set(b.operands)) != len(b.operands):
                out.append(Violation(None, "repeated qubit operand", f"{gd.name}: {b.gate_name}"))
            names: set[str] = set()
            for e in b.params:
                _collect_names(e, names)
            for n in names - set(gd.params):
                out.append(Violation(None, "unknown gate parameter", f"{gd.name}: {n}"))

    for i, stmt in enumerate(program.statements):
        name = stmt.gate_name
        if name == BARRIER:
            if stmt.params:
                out.append(Violation(i, "barrier takes no parameters", print_statement(stmt)))
            if not stmt.operands:
                out.append(Violation(i, "barrier requires at least one operand", ""))
        elif name in BUILTIN_GATES:
            n_par, n_q = GATE_SIGNATURES[name]
            if len(stmt.params) != n_par:
                out.append(Violation(i, "parameter count mismatch", print_statement(stmt)))
            if len(stmt.operands) != n_q:
                out.append(Violation(i, "qubit argument count mismatch", print_statement(stmt)))
        elif name in defs:
            gd = defs[name]
            if len(stmt.params) != len(gd.params):
                out.append(Violation(i, "parameter count mismatch", print_statement(stmt)))
            if len(stmt.operands) != len(gd.args):
                out.append(Violation(i, "qubit argument count mismatch", print_statement(stmt)))
        else:
            out.append(Violation(i, "not defined in this scope", name))
        for reg, idx in stmt.operands:
            if reg not in reg_kinds:
                out.append(Violation(i, "unknown register", reg))
                continue
            kind, size = reg_kinds[reg]
            if kind != "qreg":
                out.append(Violation(i, "not a quantum register", reg))
            elif idx >= size:
                out.append(Violation(i, "index out of range", f"{reg}[{idx}]"))
        if len(set(stmt.operands)) != len(stmt.operands):
            out.append(Violation(i, "repeated qubit operand", print_statement(stmt)))
        for p in stmt.params:
            if not math.isfinite(p.value):
                out.append(Violation(i, "angle is not finite", print_statement(stmt)))
    return out


def _collect_names(e: Expr, into: set[str]):
    if isinstance(e, Name):
        into.add(e.ident)
    elif isinstance(e, Neg):
        _collect_names(e.operand, into)
    elif isinstance(e, Bin):
        _collect_names(e.left, into)
        _collect_names(e.right, into)
