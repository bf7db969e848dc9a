"""Client for external classifier plug-ins speaking age-clf/1 over stdio."""

from __future__ import annotations

import json
import queue
import subprocess
import threading
from typing import Optional, Sequence

from .classify import Prediction
from .corpus import Label, Post
from .errors import PluginError, ProtocolError

PROTOCOL_NAME = "age-clf/1"

_EOF = object()


class ExternalClassifierClient:
    """Owns one plug-in process; writes are serialized, responses are
    correlated by id so arrival order never affects output order."""

    def __init__(
        self,
        command: Sequence[str],
        *,
        timeout: float = 30.0,
        retries: int = 1,
    ):
        if timeout <= 0:
            raise ValueError("timeout must be positive")
        if retries < 0:
            raise ValueError("retries must be non-negative")
        self.command = list(command)
        self.timeout = timeout
        self.retries = retries
        self.plugin_name: Optional[str] = None
        self._process: Optional[subprocess.Popen] = None
        self._lines: Optional[queue.Queue] = None
        self._reader: Optional[threading.Thread] = None
        self._write_lock = threading.Lock()

    def __enter__(self) -> "ExternalClassifierClient":
        self.start()
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    def _drain_stdout(self, stream, lines: queue.Queue) -> None:
        for raw in stream:
            lines.put(raw)
        lines.put(_EOF)

    def start(self) -> None:
        if self._process is not None and self._process.poll() is None:
            return
        try:
            self._process = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                encoding="utf-8",
                bufsize=1,
            )
        except OSError as exc:
            raise PluginError(f"cannot start plug-in {self.command!r}: {exc}") from exc
        self._lines = queue.Queue()
        self._reader = threading.Thread(
            target=self._drain_stdout,
            args=(self._process.stdout, self._lines),
            daemon=True,
        )
        self._reader.start()
        self._send({"protocol": PROTOCOL_NAME})
        reply = self._read_message()
        if reply.get("ok") is not True:
            raise ProtocolError(f"handshake rejected: {json.dumps(reply)}")
        name = reply.get("name")
        self.plugin_name = str(name) if name is not None else None

    def close(self) -> None:
        process = self._process
        self._process = None
        if process is None:
            return
        try:
            if process.stdin:
                process.stdin.close()
            process.wait(timeout=5)
        except (OSError, subprocess.TimeoutExpired):
            process.kill()
            process.wait()

    def _send(self, message: dict) -> None:
        process = self._process
        if process is None or process.stdin is None:
            raise PluginError("plug-in process is not running")
        payload = json.dumps(message, ensure_ascii=False)
        with self._write_lock:
            try:
                process.stdin.write(payload + "\n")
                process.stdin.flush()
            except (OSError, ValueError) as exc:
                raise PluginError(f"plug-in pipe closed: {exc}") from exc

    def _read_message(self) -> dict:
        assert self._lines is not None
        try:
            raw = self._lines.get(timeout=self.timeout)
        except queue.Empty:
            raise PluginError(
                f"plug-in did not respond within {self.timeout} seconds"
            ) from None
        if raw is _EOF:
            raise PluginError("plug-in closed its output stream")
        line = raw.strip()
        try:
            message = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"plug-in sent a non-JSON line: {line!r}") from exc
        if not isinstance(message, dict):
            raise ProtocolError(f"plug-in sent a non-object line: {line!r}")
        return message

    def _classify_once(
        self, pending: dict[str, Post], results: dict[str, Prediction]
    ) -> None:
        for post in pending.values():
            self._send({"id": post.id, "text": post.text})
        remaining = set(pending)
        while remaining:
            message = self._read_message()
            if "error" in message:
                raise ProtocolError(
                    f"plug-in reported an error: {message.get('error')!r}"
                )
            pid = message.get("id")
            if not isinstance(pid, str) or pid not in pending:
                raise ProtocolError(f"plug-in answered unknown id: {pid!r}")
            if pid in results:
                raise ProtocolError(f"plug-in answered id {pid!r} twice")
            label_text = message.get("label")
            if label_text not in (Label.AGE.value, Label.NO_AGE.value):
                raise ProtocolError(
                    f"plug-in sent bad label {label_text!r} for id {pid!r}"
                )
            score = message.get("score")
            if not isinstance(score, (int, float)) or isinstance(score, bool):
                raise ProtocolError(
                    f"plug-in sent non-numeric score for id {pid!r}: {score!r}"
                )
            results[pid] = Prediction(
                post_id=pid, label=Label(label_text), score=float(score)
            )
            remaining.discard(pid)

    def classify(self, posts: Sequence[Post]) -> list[Prediction]:
        """One Prediction per post, in input order. A crashed plug-in is
        restarted and the unanswered posts are resent, up to the configured
        retry count."""
        ids = [post.id for post in posts]
        if len(set(ids)) != len(ids):
            raise ProtocolError("duplicate post ids in one batch")
        results: dict[str, Prediction] = {}
        attempts_left = self.retries + 1
        while True:
            pending = {post.id: post for post in posts if post.id not in results}
            if not pending:
                break
            try:
                self.start()
                self._classify_once(pending, results)
            except PluginError:
                attempts_left -= 1
                self.close()
                if attempts_left <= 0:
                    raise
        return [results[post.id] for post in posts]


def classify_external(
    client: ExternalClassifierClient, posts: Sequence[Post]
) -> list[Prediction]:
    return client.classify(posts)
