/**
 * Semantics-preserving rewrites over parsed programs.  Every transform
 * returns a new program; gate definitions and registers pass through
 * untouched.  All rewrites only ever touch adjacent statements with
 * identical operand lists, which keeps soundness independent of any
 * commutation analysis.
 */

import { ADDITIVE_ROTATIONS, BARRIER, DAGGER_PAIRS, SELF_INVERSE } from "./gates.js";
import { formatNumber, Program, Statement } from "./qasm.js";

export type Transform = (program: Program) => Program;

function sameOperands(a: Statement, b: Statement): boolean {
  return (
    a.operands.length === b.operands.length &&
    a.operands.every(
      (o, i) =>
        o.register === b.operands[i]!.register && o.index === b.operands[i]!.index,
    )
  );
}

function withStatements(program: Program, statements: Statement[]): Program {
  return { ...program, statements };
}

function identity(program: Program): Program {
  return program;
}

function dropBarriers(program: Program): Program {
  return withStatements(
    program,
    program.statements.filter((s) => s.name !== BARRIER),
  );
}

/** h h, cx cx, s sdg, ... on identical operands annihilate. */
function cancelAdjacentInverses(program: Program): Program {
  let statements = [...program.statements];
  for (;;) {
    let changed = false;
    const out: Statement[] = [];
    let i = 0;
    while (i < statements.length) {
      const a = statements[i]!;
      const b = statements[i + 1];
      if (b !== undefined && sameOperands(a, b)) {
        const selfPair = SELF_INVERSE.has(a.name) && b.name === a.name;
        const daggerPair = DAGGER_PAIRS[a.name] === b.name;
        if (selfPair || daggerPair) {
          i += 2;
          changed = true;
          continue;
        }
      }
      out.push(a);
      i++;
    }
    statements = out;
    if (!changed) return withStatements(program, statements);
  }
}

/** rz(a) rz(b) -> rz(a+b) on identical operands; exact zeros vanish. */
function mergeAdjacentRotations(program: Program): Program {
  let statements = [...program.statements];
  for (;;) {
    let changed = false;
    const out: Statement[] = [];
    let i = 0;
    while (i < statements.length) {
      const a = statements[i]!;
      const b = statements[i + 1];
      if (
        b !== undefined &&
        a.name === b.name &&
        ADDITIVE_ROTATIONS.has(a.name) &&
        sameOperands(a, b)
      ) {
        const angle = a.params[0]!.value + b.params[0]!.value;
        changed = true;
        i += 2;
        if (Math.abs(angle) > 1e-12) {
          out.push({
            name: a.name,
            params: [{ text: formatNumber(angle), value: angle }],
            operands: a.operands,
          });
        }
        continue;
      }
      out.push(a);
      i++;
    }
    statements = out;
    if (!changed) return withStatements(program, statements);
  }
}

export const TRANSFORMS: Readonly<Record<string, Transform>> = {
  "noop.identity": identity,
  "tidy.drop_barriers": dropBarriers,
  "tidy.cancel_adjacent_inverses": cancelAdjacentInverses,
  "tidy.merge_adjacent_rotations": mergeAdjacentRotations,
};

export function listTransforms(): string[] {
  return Object.keys(TRANSFORMS).sort();
}
