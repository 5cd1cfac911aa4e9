/**
 * Entry point: newline-delimited JSON server over stdin/stdout.
 *
 * Reads one request per line, writes exactly one response line per
 * request, in order.  stderr carries free-form diagnostics.  Exits 0 on a
 * "shutdown" request or clean stdin EOF, 1 on an engine-version pin
 * mismatch at startup.
 */

import * as readline from "node:readline";

import { ENGINE_VERSION, handleRequest, newSession } from "./engine.js";

/** The engine version this server was validated against. */
const PINNED_ENGINE_VERSION = "1.0.0";

function main(): void {
  if (ENGINE_VERSION !== PINNED_ENGINE_VERSION) {
    process.stderr.write(
      `engine version ${ENGINE_VERSION} does not match pinned ` +
        `${PINNED_ENGINE_VERSION}; refusing to start\n`,
    );
    process.exit(1);
  }

  const session = newSession();
  const rl = readline.createInterface({ input: process.stdin, terminal: false });

  rl.on("line", (line) => {
    if (line.trim() === "") return;
    let request: unknown;
    try {
      request = JSON.parse(line);
    } catch {
      process.stdout.write(
        JSON.stringify({
          id: null,
          ok: false,
          error: "request line is not valid JSON",
          stage: "protocol",
        }) + "\n",
      );
      return;
    }
    const { response, shutdown } = handleRequest(session, request);
    const payload = JSON.stringify(response) + "\n";
    if (shutdown) {
      rl.close();
      process.stdout.write(payload, () => process.exit(0));
    } else {
      process.stdout.write(payload);
    }
  });

  rl.on("close", () => {
    // stdin EOF without a shutdown request: exit cleanly.
    process.exitCode = 0;
  });
}

main();
