"""Client for external toolchains speaking the JSON-lines wire protocol.

One request object per line on the child's stdin; exactly one response
line per request, in order, with a matching "id".  stderr is free-form
diagnostics and is drained so the child can never block on it.

Requests:
    {"id": n, "op": "import", "qasm": text}
    {"id": n, "op": "transform", "handle": h, "transform": t}
    {"id": n, "op": "export", "handle": h}
    {"id": n, "op": "list_transforms"}
    {"id": n, "op": "shutdown"}
Responses:
    {"id": n, "ok": true, ...}   payload key varies by op
    {"id": n, "ok": false, "error": text, "stage": text}
"""

from __future__ import annotations

import json
import os
import queue
import shlex
import subprocess
import threading

from .adapters import Adapter, AdapterFailure

DEFAULT_TIMEOUT_SECS = 30.0


class SpawnError(AdapterFailure):
    def __init__(self, adapter_id: str, message: str):
        super().__init__(adapter_id, "spawn", message)


class Timeout(AdapterFailure):
    def __init__(self, adapter_id: str, stage: str, message: str):
        super().__init__(adapter_id, "timeout", f"{stage}: {message}")


class ProtocolError(AdapterFailure):
    def __init__(self, adapter_id: str, message: str):
        super().__init__(adapter_id, "protocol", message)


class SubprocessAdapter(Adapter):
    """Drives one child process through the wire protocol.

    A reader thread owns stdout so per-call timeouts cannot lose or split
    lines; a second thread drains stderr into a bounded tail for error
    reporting.
    """

    def __init__(
        self,
        adapter_id: str,
        command: str,
        timeout_secs: float = DEFAULT_TIMEOUT_SECS,
        env: dict[str, str] | None = None,
    ):
        self.adapter_id = adapter_id
        self._timeout = timeout_secs
        self._next_id = 0
        self._lock = threading.Lock()
        self._lines: queue.Queue[str | None] = queue.Queue()
        self._stderr_tail: list[str] = []
        full_env = dict(os.environ)
        if env:
            full_env.update(env)
        try:
            self._proc = subprocess.Popen(
                shlex.split(command),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
                text=True,
                env=full_env,
            )
        except OSError as e:
            raise SpawnError(adapter_id, str(e)) from None
        threading.Thread(target=self._read_stdout, daemon=True).start()
        threading.Thread(target=self._drain_stderr, daemon=True).start()

    def _read_stdout(self):
        for line in self._proc.stdout:
            self._lines.put(line)
        self._lines.put(None)

    def _drain_stderr(self):
        for line in self._proc.stderr:
            self._stderr_tail.append(line.rstrip("\n"))
            del self._stderr_tail[:-20]

    def _stderr_context(self) -> str:
        return "; ".join(self._stderr_tail[-3:])

    def _request(self, stage: str, payload: dict) -> dict:
        with self._lock:
            req_id = self._next_id
            self._next_id += 1
            payload = {"id": req_id, **payload}
            if self._proc.poll() is not None:
                raise ProtocolError(
                    self.adapter_id,
                    f"process exited with code {self._proc.returncode} "
                    f"({self._stderr_context()})".rstrip(" ()"),
                )
            try:
                self._proc.stdin.write(json.dumps(payload) + "\n")
                self._proc.stdin.flush()
            except (BrokenPipeError, OSError):
                raise ProtocolError(
                    self.adapter_id,
                    f"process closed stdin ({self._stderr_context()})".rstrip(" ()"),
                ) from None
            try:
                line = self._lines.get(timeout=self._timeout)
            except queue.Empty:
                self._proc.kill()
                raise Timeout(
                    self.adapter_id, stage, f"no response within {self._timeout}s"
                ) from None
            if line is None:
                raise ProtocolError(
                    self.adapter_id,
                    f"process exited before responding ({self._stderr_context()})".rstrip(
                        " ()"
                    ),
                )
            try:
                response = json.loads(line)
            except json.JSONDecodeError:
                raise ProtocolError(
                    self.adapter_id, f"response is not JSON: {line.strip()[:200]!r}"
                ) from None
            if not isinstance(response, dict) or response.get("id") != req_id:
                raise ProtocolError(
                    self.adapter_id,
                    f"response id mismatch: sent {req_id}, got {response!r}"[:300],
                )
        if not response.get("ok"):
            raise AdapterFailure(
                self.adapter_id,
                response.get("stage", stage),
                str(response.get("error", "unspecified error")),
            )
        return response

    def _field(self, response: dict, key: str, stage: str) -> object:
        if key not in response:
            raise ProtocolError(self.adapter_id, f"{stage} response lacks '{key}'")
        return response[key]

    def import_qasm(self, text: str) -> str:
        r = self._request("import", {"op": "import", "qasm": text})
        return str(self._field(r, "handle", "import"))

    def apply_transform(self, handle: str, transform_id: str) -> str:
        r = self._request(
            "transform", {"op": "transform", "handle": handle, "transform": transform_id}
        )
        return str(self._field(r, "handle", "transform"))

    def export_qasm(self, handle: str) -> str:
        r = self._request("export", {"op": "export", "handle": handle})
        return str(self._field(r, "qasm", "export"))

    def list_transforms(self) -> list[str]:
        r = self._request("list_transforms", {"op": "list_transforms"})
        transforms = self._field(r, "transforms", "list_transforms")
        if not isinstance(transforms, list):
            raise ProtocolError(self.adapter_id, "'transforms' is not a list")
        return [str(t) for t in transforms]

    def close(self) -> None:
        grace = min(2.0, self._timeout)
        if self._proc.poll() is None:
            try:
                with self._lock:
                    req_id = self._next_id
                    self._next_id += 1
                    self._proc.stdin.write(
                        json.dumps({"id": req_id, "op": "shutdown"}) + "\n"
                    )
                    self._proc.stdin.flush()
                self._proc.wait(timeout=grace)
            except (OSError, subprocess.TimeoutExpired):
                self._proc.kill()
        try:
            self._proc.wait(timeout=grace)
        except subprocess.TimeoutExpired:
            self._proc.kill()
            self._proc.wait()
