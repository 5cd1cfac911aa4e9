/**
 * Request handling for the JSON-lines wire protocol.
 *
 * One request object in, exactly one response object out, echoing the
 * request's "id" (null when absent or unreadable).  Toolchain errors come
 * back as {ok:false, error, stage}; nothing in here may throw — a broken
 * request or an internal failure must never take the server down.
 */

import { parse, printProgram, Program, QasmError } from "./qasm.js";
import { listTransforms, TRANSFORMS } from "./transforms.js";

export const ENGINE_VERSION = "1.0.0";

export interface Session {
  nextHandle: number;
  readonly table: Map<string, Program>;
}

export function newSession(): Session {
  return { nextHandle: 0, table: new Map() };
}

export interface HandledRequest {
  readonly response: Record<string, unknown>;
  readonly shutdown: boolean;
}

function failure(
  id: unknown,
  stage: string,
  error: string,
): Record<string, unknown> {
  return { id: id ?? null, ok: false, error, stage };
}

function asRecord(value: unknown): Record<string, unknown> | null {
  if (typeof value === "object" && value !== null && !Array.isArray(value)) {
    return value as Record<string, unknown>;
  }
  return null;
}

export function handleRequest(session: Session, request: unknown): HandledRequest {
  const req = asRecord(request);
  if (req === null) {
    return {
      response: failure(null, "protocol", "request is not a JSON object"),
      shutdown: false,
    };
  }
  const id = "id" in req ? req["id"] : null;
  try {
    switch (req["op"]) {
      case "import": {
        const qasm = req["qasm"];
        if (typeof qasm !== "string") {
          return {
            response: failure(id, "protocol", "'import' needs a string 'qasm'"),
            shutdown: false,
          };
        }
        let program: Program;
        try {
          program = parse(qasm);
        } catch (e) {
          if (e instanceof QasmError) {
            return { response: failure(id, "import", e.message), shutdown: false };
          }
          throw e;
        }
        const handle = `h${session.nextHandle++}`;
        session.table.set(handle, program);
        return { response: { id, ok: true, handle }, shutdown: false };
      }
      case "transform": {
        const handle = req["handle"];
        const transformId = req["transform"];
        if (typeof handle !== "string" || typeof transformId !== "string") {
          return {
            response: failure(
              id,
              "protocol",
              "'transform' needs string 'handle' and 'transform'",
            ),
            shutdown: false,
          };
        }
        const program = session.table.get(handle);
        if (program === undefined) {
          return {
            response: failure(id, "transform", `unknown handle '${handle}'`),
            shutdown: false,
          };
        }
        const fn = TRANSFORMS[transformId];
        if (fn === undefined) {
          return {
            response: failure(id, "transform", `unknown transform '${transformId}'`),
            shutdown: false,
          };
        }
        const next = `h${session.nextHandle++}`;
        session.table.set(next, fn(program));
        return { response: { id, ok: true, handle: next }, shutdown: false };
      }
      case "export": {
        const handle = req["handle"];
        if (typeof handle !== "string") {
          return {
            response: failure(id, "protocol", "'export' needs a string 'handle'"),
            shutdown: false,
          };
        }
        const program = session.table.get(handle);
        if (program === undefined) {
          return {
            response: failure(id, "export", `unknown handle '${handle}'`),
            shutdown: false,
          };
        }
        return {
          response: { id, ok: true, qasm: printProgram(program) },
          shutdown: false,
        };
      }
      case "list_transforms":
        return {
          response: { id, ok: true, transforms: listTransforms() },
          shutdown: false,
        };
      case "shutdown":
        return { response: { id, ok: true }, shutdown: true };
      default:
        return {
          response: failure(id, "protocol", `unknown op ${JSON.stringify(req["op"])}`),
          shutdown: false,
        };
    }
  } catch (e) {
    // Isolation: an unexpected internal error becomes a response.
    return {
      response: failure(id, "internal", e instanceof Error ? e.message : String(e)),
      shutdown: false,
    };
  }
}
