/**
 * Parser and printer for the OpenQASM 2.0 subset this toolchain supports:
 * prologue, quantum/classical register declarations, one-level custom gate
 * definitions, gate statements, and barriers.  Parameter expressions keep
 * their source text so exporting preserves the incoming spelling; the
 * numeric value is evaluated once for use by transforms.
 */

import { BARRIER, GATE_SIGNATURES } from "./gates.js";

export class QasmError extends Error {}

export interface Param {
  readonly text: string;
  readonly value: number;
}

export interface Operand {
  readonly register: string;
  readonly index: number;
}

export interface Statement {
  readonly name: string;
  readonly params: readonly Param[];
  readonly operands: readonly Operand[];
}

export interface DefStatement {
  readonly name: string;
  readonly paramTexts: readonly string[]; // symbolic, kept verbatim
  readonly argNames: readonly string[];
}

export interface GateDef {
  readonly name: string;
  readonly paramNames: readonly string[];
  readonly argNames: readonly string[];
  readonly body: readonly DefStatement[];
}

export interface Register {
  readonly name: string;
  readonly size: number;
}

export interface Program {
  readonly qregs: readonly Register[];
  readonly cregs: readonly Register[];
  readonly gateDefs: readonly GateDef[];
  readonly statements: readonly Statement[];
}

// ---------------------------------------------------------------- lexer

type TokenKind = "ident" | "number" | "symbol" | "string";

interface Token {
  readonly kind: TokenKind;
  readonly text: string;
}

const SYMBOLS = new Set(["(", ")", "[", "]", "{", "}", ",", ";", "*", "/", "+", "-"]);

function lex(source: string): Token[] {
  const tokens: Token[] = [];
  let i = 0;
  const n = source.length;
  while (i < n) {
    const c = source[i]!;
    if (c === "/" && source[i + 1] === "/") {
      while (i < n && source[i] !== "\n") i++;
      continue;
    }
    if (/\s/.test(c)) {
      i++;
      continue;
    }
    if (c === '"') {
      const end = source.indexOf('"', i + 1);
      if (end < 0) throw new QasmError("unterminated string literal");
      tokens.push({ kind: "string", text: source.slice(i + 1, end) });
      i = end + 1;
      continue;
    }
    if (/[0-9.]/.test(c)) {
      const m = /^\d*\.?\d+(?:[eE][+-]?\d+)?/.exec(source.slice(i));
      if (!m) throw new QasmError(`bad number at '${source.slice(i, i + 10)}'`);
      tokens.push({ kind: "number", text: m[0] });
      i += m[0].length;
      continue;
    }
    if (/[A-Za-z_]/.test(c)) {
      const m = /^[A-Za-z_][A-Za-z0-9_]*/.exec(source.slice(i))!;
      tokens.push({ kind: "ident", text: m[0] });
      i += m[0].length;
      continue;
    }
    if (SYMBOLS.has(c)) {
      tokens.push({ kind: "symbol", text: c });
      i++;
      continue;
    }
    throw new QasmError(`unexpected character '${c}'`);
  }
  return tokens;
}

// ------------------------------------------------- parameter expressions

/**
 * Tiny arithmetic over numbers and `pi` with + - * / and unary minus,
 * evaluated eagerly.  `symbols` maps gate-definition parameter names to a
 * placeholder so definition bodies can be arity-checked without values.
 */
class ExprParser {
  private pos = 0;

  constructor(
    private readonly tokens: Token[],
    private readonly symbols: ReadonlySet<string>,
  ) {}

  parse(): number {
    const v = this.sum();
    if (this.pos !== this.tokens.length) {
      throw new QasmError(
        `unexpected '${this.tokens[this.pos]!.text}' in parameter expression`,
      );
    }
    return v;
  }

  private sum(): number {
    let v = this.product();
    while (this.peek("+") || this.peek("-")) {
      const op = this.next().text;
      const rhs = this.product();
      v = op === "+" ? v + rhs : v - rhs;
    }
    return v;
  }

  private product(): number {
    let v = this.atom();
    while (this.peek("*") || this.peek("/")) {
      const op = this.next().text;
      const rhs = this.atom();
      if (op === "/" && rhs === 0) throw new QasmError("division by zero in parameter");
      v = op === "*" ? v * rhs : v / rhs;
    }
    return v;
  }

  private atom(): number {
    if (this.peek("-")) {
      this.next();
      return -this.atom();
    }
    if (this.peek("+")) {
      this.next();
      return this.atom();
    }
    if (this.peek("(")) {
      this.next();
      const v = this.sum();
      this.expect(")");
      return v;
    }
    const tok = this.next();
    if (tok.kind === "number") return Number(tok.text);
    if (tok.kind === "ident") {
      if (tok.text === "pi") return Math.PI;
      if (this.symbols.has(tok.text)) return 0.5; // placeholder for symbolic params
      throw new QasmError(`unknown identifier '${tok.text}' in parameter expression`);
    }
    throw new QasmError(`unexpected '${tok.text}' in parameter expression`);
  }

  private peek(text: string): boolean {
    const t = this.tokens[this.pos];
    return t !== undefined && t.kind === "symbol" && t.text === text;
  }

  private next(): Token {
    const t = this.tokens[this.pos];
    if (t === undefined) throw new QasmError("parameter expression ends abruptly");
    this.pos++;
    return t;
  }

  private expect(text: string): void {
    const t = this.next();
    if (t.text !== text) throw new QasmError(`expected '${text}', got '${t.text}'`);
  }
}

function evalParam(tokens: Token[], symbols: ReadonlySet<string>): number {
  const value = new ExprParser(tokens, symbols).parse();
  if (!Number.isFinite(value)) throw new QasmError("parameter is not finite");
  return value;
}

/** Render a numeric angle so it re-parses to the same double. */
export function formatNumber(v: number): string {
  if (Object.is(v, -0)) return "0";
  return String(v);
}

// ---------------------------------------------------------------- parser

class Parser {
  private pos = 0;

  constructor(private readonly tokens: Token[]) {}

  program(): Program {
    this.keyword("OPENQASM");
    const version = this.next();
    if (version.text !== "2.0") {
      throw new QasmError(`unsupported OPENQASM version '${version.text}'`);
    }
    this.expect(";");
    if (this.peekIdent("include")) {
      this.next();
      const file = this.next();
      if (file.kind !== "string") throw new QasmError("include expects a string");
      this.expect(";");
    }

    const qregs: Register[] = [];
    const cregs: Register[] = [];
    const gateDefs: GateDef[] = [];
    const statements: Statement[] = [];
    const defNames = new Set<string>();
    const regNames = new Set<string>();

    while (this.pos < this.tokens.length) {
      if (this.peekIdent("qreg") || this.peekIdent("creg")) {
        const isQ = this.next().text === "qreg";
        const name = this.ident("register name");
        this.expect("[");
        const size = this.integer("register size");
        this.expect("]");
        this.expect(";");
        if (regNames.has(name)) throw new QasmError(`register '${name}' redeclared`);
        if (size < 1) throw new QasmError(`register '${name}' has size ${size}`);
        regNames.add(name);
        (isQ ? qregs : cregs).push({ name, size });
        continue;
      }
      if (this.peekIdent("gate")) {
        const def = this.gateDef(defNames);
        defNames.add(def.name);
        gateDefs.push(def);
        continue;
      }
      if (this.peekIdent("measure") || this.peekIdent("reset") || this.peekIdent("if")) {
        throw new QasmError(`'${this.tokens[this.pos]!.text}' is not supported`);
      }
      statements.push(this.statement(qregs, defNames, gateDefs));
    }
    return { qregs, cregs, gateDefs, statements };
  }

  private gateDef(existing: ReadonlySet<string>): GateDef {
    this.keyword("gate");
    const name = this.ident("gate name");
    if (existing.has(name) || name in GATE_SIGNATURES) {
      throw new QasmError(`gate '${name}' is already defined`);
    }
    let paramNames: string[] = [];
    if (this.peekSymbol("(")) {
      this.next();
      paramNames = this.identList(")");
      this.expect(")");
    }
    const argNames = this.identList("{");
    if (argNames.length === 0) throw new QasmError(`gate '${name}' declares no qubits`);
    this.expect("{");
    const symbols = new Set(paramNames);
    const args = new Set(argNames);
    const body: DefStatement[] = [];
    while (!this.peekSymbol("}")) {
      const gate = this.ident("gate name in definition body");
      if (!(gate in GATE_SIGNATURES)) {
        throw new QasmError(
          `only built-in gates may appear in definitions, not '${gate}'`,
        );
      }
      const [nParams, nQubits] = GATE_SIGNATURES[gate]!;
      const paramTexts: string[] = [];
      if (this.peekSymbol("(")) {
        this.next();
        while (!this.peekSymbol(")")) {
          const { text, tokens } = this.paramTokens();
          evalParam(tokens, symbols); // arity/shape check only
          paramTexts.push(text);
          if (this.peekSymbol(",")) this.next();
        }
        this.expect(")");
      }
      if (paramTexts.length !== nParams) {
        throw new QasmError(
          `'${gate}' expects ${nParams} parameter(s), got ${paramTexts.length}`,
        );
      }
      const usedArgs: string[] = [];
      for (;;) {
        const arg = this.ident("qubit argument");
        if (!args.has(arg)) {
          throw new QasmError(`'${arg}' is not an argument of gate '${name}'`);
        }
        usedArgs.push(arg);
        if (this.peekSymbol(",")) {
          this.next();
          continue;
        }
        break;
      }
      this.expect(";");
      if (usedArgs.length !== nQubits) {
        throw new QasmError(
          `'${gate}' expects ${nQubits} qubit(s), got ${usedArgs.length}`,
        );
      }
      body.push({ name: gate, paramTexts, argNames: usedArgs });
    }
    this.expect("}");
    return { name, paramNames, argNames, body };
  }

  private statement(
    qregs: readonly Register[],
    defNames: ReadonlySet<string>,
    gateDefs: readonly GateDef[],
  ): Statement {
    const name = this.ident("gate name");
    let nParams: number;
    let nQubits: number;
    if (name === BARRIER) {
      nParams = 0;
      nQubits = -1; // any positive count
    } else if (name in GATE_SIGNATURES) {
      [nParams, nQubits] = GATE_SIGNATURES[name]!;
    } else if (defNames.has(name)) {
      const def = gateDefs.find((d) => d.name === name)!;
      nParams = def.paramNames.length;
      nQubits = def.argNames.length;
    } else {
      throw new QasmError(`unknown gate '${name}'`);
    }

    const params: Param[] = [];
    if (this.peekSymbol("(")) {
      this.next();
      while (!this.peekSymbol(")")) {
        const { text, tokens } = this.paramTokens();
        params.push({ text, value: evalParam(tokens, new Set()) });
        if (this.peekSymbol(",")) this.next();
      }
      this.expect(")");
    }
    if (params.length !== nParams) {
      throw new QasmError(
        `'${name}' expects ${nParams} parameter(s), got ${params.length}`,
      );
    }

    const operands: Operand[] = [];
    for (;;) {
      const reg = this.ident("register name");
      const found = qregs.find((r) => r.name === reg);
      if (!found) throw new QasmError(`unknown quantum register '${reg}'`);
      this.expect("[");
      const index = this.integer("qubit index");
      this.expect("]");
      if (index >= found.size) {
        throw new QasmError(
          `index ${index} out of range for register '${reg}[${found.size}]'`,
        );
      }
      operands.push({ register: reg, index });
      if (this.peekSymbol(",")) {
        this.next();
        continue;
      }
      break;
    }
    this.expect(";");

    if (nQubits >= 0 && operands.length !== nQubits) {
      throw new QasmError(
        `'${name}' expects ${nQubits} qubit(s), got ${operands.length}`,
      );
    }
    const seen = new Set(operands.map((o) => `${o.register}[${o.index}]`));
    if (seen.size !== operands.length) {
      throw new QasmError(`'${name}' applied to a repeated qubit`);
    }
    return { name, params, operands };
  }

  /** Collect one parameter's tokens up to an unnested ',' or ')'. */
  private paramTokens(): { text: string; tokens: Token[] } {
    const collected: Token[] = [];
    let depth = 0;
    while (this.pos < this.tokens.length) {
      const t = this.tokens[this.pos]!;
      if (t.kind === "symbol" && t.text === "(") depth++;
      if (t.kind === "symbol" && depth === 0 && (t.text === "," || t.text === ")")) {
        break;
      }
      if (t.kind === "symbol" && t.text === ")") depth--;
      collected.push(t);
      this.pos++;
    }
    if (collected.length === 0) throw new QasmError("empty parameter");
    return { text: collected.map((t) => t.text).join(""), tokens: collected };
  }

  private identList(stop: string): string[] {
    const names: string[] = [];
    while (!this.peekSymbol(stop)) {
      names.push(this.ident("name"));
      if (this.peekSymbol(",")) this.next();
      else break;
    }
    return names;
  }

  private keyword(text: string): void {
    const t = this.next();
    if (t.kind !== "ident" || t.text !== text) {
      throw new QasmError(`expected '${text}', got '${t.text}'`);
    }
  }

  private ident(what: string): string {
    const t = this.next();
    if (t.kind !== "ident") throw new QasmError(`expected ${what}, got '${t.text}'`);
    return t.text;
  }

  private integer(what: string): number {
    const t = this.next();
    if (t.kind !== "number" || !/^\d+$/.test(t.text)) {
      throw new QasmError(`expected ${what}, got '${t.text}'`);
    }
    return Number(t.text);
  }

  private expect(text: string): void {
    const t = this.next();
    if (t.text !== text) throw new QasmError(`expected '${text}', got '${t.text}'`);
  }

  private peekSymbol(text: string): boolean {
    const t = this.tokens[this.pos];
    return t !== undefined && t.kind === "symbol" && t.text === text;
  }

  private peekIdent(text: string): boolean {
    const t = this.tokens[this.pos];
    return t !== undefined && t.kind === "ident" && t.text === text;
  }

  private next(): Token {
    const t = this.tokens[this.pos];
    if (t === undefined) throw new QasmError("program ends abruptly");
    this.pos++;
    return t;
  }
}

export function parse(source: string): Program {
  if (!/^\s*OPENQASM/.test(source)) {
    throw new QasmError("missing OPENQASM header");
  }
  return new Parser(lex(source)).program();
}

// --------------------------------------------------------------- printer

function printStatementLike(
  name: string,
  params: readonly string[],
  operands: readonly string[],
): string {
  const p = params.length > 0 ? `(${params.join(",")})` : "";
  return `${name}${p} ${operands.join(",")};`;
}

export function printStatement(stmt: Statement): string {
  return printStatementLike(
    stmt.name,
    stmt.params.map((p) => p.text),
    stmt.operands.map((o) => `${o.register}[${o.index}]`),
  );
}

export function printProgram(program: Program): string {
  const lines: string[] = ["OPENQASM 2.0;", 'include "qelib1.inc";'];
  for (const r of program.qregs) lines.push(`qreg ${r.name}[${r.size}];`);
  for (const r of program.cregs) lines.push(`creg ${r.name}[${r.size}];`);
  for (const def of program.gateDefs) {
    const p = def.paramNames.length > 0 ? `(${def.paramNames.join(",")})` : "";
    lines.push(`gate ${def.name}${p} ${def.argNames.join(",")} {`);
    for (const s of def.body) {
      lines.push("  " + printStatementLike(s.name, s.paramTexts, s.argNames));
    }
    lines.push("}");
  }
  for (const stmt of program.statements) lines.push(printStatement(stmt));
  return lines.join("\n") + "\n";
}
