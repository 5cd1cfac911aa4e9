/**
 * Minimal dense unitary simulator used only by tests to verify that
 * transforms preserve semantics.  Complex matrices are stored as separate
 * real/imaginary Float64Arrays, row-major.  Qubit 0 is the least
 * significant bit of the state index; a gate's first operand is the least
 * significant bit of its local matrix.
 */

import { Program, Statement } from "../src/qasm.js";

export interface CMatrix {
  readonly dim: number;
  readonly re: Float64Array;
  readonly im: Float64Array;
}

export function cIdentity(dim: number): CMatrix {
  const re = new Float64Array(dim * dim);
  const im = new Float64Array(dim * dim);
  for (let i = 0; i < dim; i++) re[i * dim + i] = 1;
  return { dim, re, im };
}

export function cMul(a: CMatrix, b: CMatrix): CMatrix {
  const n = a.dim;
  const re = new Float64Array(n * n);
  const im = new Float64Array(n * n);
  for (let i = 0; i < n; i++) {
    for (let k = 0; k < n; k++) {
      const ar = a.re[i * n + k]!;
      const ai = a.im[i * n + k]!;
      if (ar === 0 && ai === 0) continue;
      for (let j = 0; j < n; j++) {
        const br = b.re[k * n + j]!;
        const bi = b.im[k * n + j]!;
        re[i * n + j] += ar * br - ai * bi;
        im[i * n + j] += ar * bi + ai * br;
      }
    }
  }
  return { dim: n, re, im };
}

function fromRows(rows: [number, number][][]): CMatrix {
  const dim = rows.length;
  const re = new Float64Array(dim * dim);
  const im = new Float64Array(dim * dim);
  rows.forEach((row, i) =>
    row.forEach(([r, m], j) => {
      re[i * dim + j] = r;
      im[i * dim + j] = m;
    }),
  );
  return { dim, re, im };
}

const Z0: [number, number] = [0, 0];
const ONE: [number, number] = [1, 0];
const S2 = 1 / Math.SQRT2;

function controlled(u: CMatrix): CMatrix {
  // local bit 0 = control, local bit 1 = target
  const out = cIdentity(4);
  const idx = [1, 3]; // states with control bit set, target bit 0/1
  for (let a = 0; a < 2; a++) {
    for (let b = 0; b < 2; b++) {
      out.re[idx[a]! * 4 + idx[b]!] = u.re[a * 2 + b]!;
      out.im[idx[a]! * 4 + idx[b]!] = u.im[a * 2 + b]!;
    }
  }
  return out;
}

function rxMat(t: number): CMatrix {
  const c = Math.cos(t / 2);
  const s = Math.sin(t / 2);
  return fromRows([
    [[c, 0], [0, -s]],
    [[0, -s], [c, 0]],
  ]);
}

function ryMat(t: number): CMatrix {
  const c = Math.cos(t / 2);
  const s = Math.sin(t / 2);
  return fromRows([
    [[c, 0], [-s, 0]],
    [[s, 0], [c, 0]],
  ]);
}

function rzMat(t: number): CMatrix {
  return fromRows([
    [[Math.cos(t / 2), -Math.sin(t / 2)], Z0],
    [Z0, [Math.cos(t / 2), Math.sin(t / 2)]],
  ]);
}

function pMat(t: number): CMatrix {
  return fromRows([
    [ONE, Z0],
    [Z0, [Math.cos(t), Math.sin(t)]],
  ]);
}

export function gateMatrix(name: string, params: readonly number[]): CMatrix {
  switch (name) {
    case "id":
      return cIdentity(2);
    case "x":
      return fromRows([
        [Z0, ONE],
        [ONE, Z0],
      ]);
    case "y":
      return fromRows([
        [Z0, [0, -1]],
        [[0, 1], Z0],
      ]);
    case "z":
      return fromRows([
        [ONE, Z0],
        [Z0, [-1, 0]],
      ]);
    case "h":
      return fromRows([
        [[S2, 0], [S2, 0]],
        [[S2, 0], [-S2, 0]],
      ]);
    case "s":
      return pMat(Math.PI / 2);
    case "sdg":
      return pMat(-Math.PI / 2);
    case "t":
      return pMat(Math.PI / 4);
    case "tdg":
      return pMat(-Math.PI / 4);
    case "rx":
      return rxMat(params[0]!);
    case "ry":
      return ryMat(params[0]!);
    case "rz":
      return rzMat(params[0]!);
    case "p":
    case "u1":
      return pMat(params[0]!);
    case "cx":
      return controlled(gateMatrix("x", []));
    case "cy":
      return controlled(gateMatrix("y", []));
    case "cz":
      return controlled(gateMatrix("z", []));
    case "cp":
      return controlled(pMat(params[0]!));
    case "crx":
      return controlled(rxMat(params[0]!));
    case "cry":
      return controlled(ryMat(params[0]!));
    case "crz":
      return controlled(rzMat(params[0]!));
    case "swap":
      return fromRows([
        [ONE, Z0, Z0, Z0],
        [Z0, Z0, ONE, Z0],
        [Z0, ONE, Z0, Z0],
        [Z0, Z0, Z0, ONE],
      ]);
    case "rxx": {
      const c = Math.cos(params[0]! / 2);
      const s = Math.sin(params[0]! / 2);
      const out = cIdentity(4);
      for (let i = 0; i < 4; i++) {
        out.re[i * 4 + i] = c;
        out.im[i * 4 + (3 - i)] = -s;
      }
      return out;
    }
    case "rzz": {
      const out = cIdentity(4);
      const t = params[0]! / 2;
      // exp(-i t Z⊗Z): diagonal phases by parity of the two bits
      const signs = [1, -1, -1, 1];
      for (let i = 0; i < 4; i++) {
        out.re[i * 4 + i] = Math.cos(t);
        out.im[i * 4 + i] = -signs[i]! * Math.sin(t);
      }
      return out;
    }
    default:
      throw new Error(`no test matrix for gate '${name}'`);
  }
}

/** Embed a k-qubit gate acting on `qubits` into an n-qubit unitary. */
export function embed(gate: CMatrix, qubits: readonly number[], n: number): CMatrix {
  const dim = 1 << n;
  const k = qubits.length;
  const re = new Float64Array(dim * dim);
  const im = new Float64Array(dim * dim);
  const mask = qubits.reduce((m, q) => m | (1 << q), 0);
  for (let i = 0; i < dim; i++) {
    let ri = 0;
    for (let b = 0; b < k; b++) ri |= ((i >> qubits[b]!) & 1) << b;
    const rest = i & ~mask;
    for (let rj = 0; rj < 1 << k; rj++) {
      const gr = gate.re[ri * (1 << k) + rj]!;
      const gi = gate.im[ri * (1 << k) + rj]!;
      if (gr === 0 && gi === 0) continue;
      let j = rest;
      for (let b = 0; b < k; b++) j |= ((rj >> b) & 1) << qubits[b]!;
      re[i * dim + j] = gr;
      im[i * dim + j] = gi;
    }
  }
  return { dim, re, im };
}

function qubitIndex(program: Program, register: string, index: number): number {
  let offset = 0;
  for (const r of program.qregs) {
    if (r.name === register) return offset + index;
    offset += r.size;
  }
  throw new Error(`register '${register}' not found`);
}

export function unitaryOf(program: Program): CMatrix {
  const n = program.qregs.reduce((s, r) => s + r.size, 0);
  if (n > 8) throw new Error(`test simulator capped at 8 qubits, got ${n}`);
  let u = cIdentity(1 << n);
  for (const stmt of program.statements) {
    if (stmt.name === "barrier") continue;
    const qubits = stmt.operands.map((o) => qubitIndex(program, o.register, o.index));
    const gate = gateMatrix(
      stmt.name,
      stmt.params.map((p) => p.value),
    );
    u = cMul(embed(gate, qubits, n), u);
  }
  return u;
}

/** max-entry |A - e^{i phi} B| for the phase taken from the largest entry of B†A. */
export function distanceUpToPhase(a: CMatrix, b: CMatrix): number {
  const n = a.dim;
  if (b.dim !== n) return Infinity;
  let bestMag = -1;
  let phR = 1;
  let phI = 0;
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) {
      // (B†A)[i][j] = sum_k conj(B[k][i]) A[k][j]
      let cr = 0;
      let ci = 0;
      for (let k = 0; k < n; k++) {
        const br = b.re[k * n + i]!;
        const bi = -b.im[k * n + i]!;
        const ar = a.re[k * n + j]!;
        const ai = a.im[k * n + j]!;
        cr += br * ar - bi * ai;
        ci += br * ai + bi * ar;
      }
      const mag = Math.hypot(cr, ci);
      if (mag > bestMag) {
        bestMag = mag;
        phR = cr / mag;
        phI = ci / mag;
      }
    }
  }
  let worst = 0;
  for (let e = 0; e < n * n; e++) {
    const dr = a.re[e]! - (phR * b.re[e]! - phI * b.im[e]!);
    const di = a.im[e]! - (phR * b.im[e]! + phI * b.re[e]!);
    worst = Math.max(worst, Math.hypot(dr, di));
  }
  return worst;
}

/** Deterministic PRNG so test circuits are reproducible. */
export function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}
