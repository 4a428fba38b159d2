"""WebSocket bridge: remote clients exchange the same binary frames the bus
carries in-process.

Text frames are control messages ({"op": "sub"|"unsub", "topic": ...});
binary frames are wire-format envelopes forwarded verbatim in both
directions. Sensor streams (point clouds, camera frames) are forced to
latest-wins toward clients so a slow consumer sees fresh data instead of a
growing backlog.
"""

from __future__ import annotations

import json
import mimetypes
import threading
from pathlib import Path

from websockets.datastructures import Headers
from websockets.exceptions import ConnectionClosed
from websockets.frames import CloseCode
from websockets.http11 import Response
from websockets.sync.server import serve

from .core import Bus, BusClosedError, SubscriptionMode
from .frames import FrameError, decode_frame, encode_frame

#: clients always get the freshest sample on these; a backlog of stale
#: sensor frames only adds latency
LATEST_WINS_PREFIXES = ("/cloud", "/cam/")

QUEUE_CAPACITY = 256


def _client_mode(topic: str) -> SubscriptionMode:
    if topic.startswith(LATEST_WINS_PREFIXES):
        return SubscriptionMode.latest()
    return SubscriptionMode.queued(QUEUE_CAPACITY)


class BusBridge:
    def __init__(self, bus: Bus, host: str = "127.0.0.1", port: int = 8765, static_dir=None):
        self.bus = bus
        self.host = host
        self.port = port
        self.static_dir = Path(static_dir).resolve() if static_dir else None
        self._server = None
        self._thread = None

    # ------------------------------------------------------------ lifecycle

    def start(self) -> None:
        self._server = serve(
            self._handle,
            self.host,
            self.port,
            process_request=self._process_request,
            max_size=64 * 1024 * 1024,  # full-resolution depth frames
            compression=None,
        )
        self.port = self._server.socket.getsockname()[1]  # resolves port 0
        self._thread = threading.Thread(
            target=self._server.serve_forever, name="bus-bridge", daemon=True
        )
        self._thread.start()

    def stop(self) -> None:
        if self._server is not None:
            self._server.shutdown()
            self._thread.join(timeout=5)
            self._server = None

    # ------------------------------------------------------------ http

    def _process_request(self, connection, request):
        """Serve the operator console under /ui; everything else is WebSocket."""
        path = request.path.split("?", 1)[0]
        if not path.startswith("/ui"):
            return None
        if self.static_dir is None:
            return connection.respond(404, "no UI bundled\n")
        rel = path[len("/ui") :].lstrip("/") or "index.html"
        target = (self.static_dir / rel).resolve()
        if not target.is_relative_to(self.static_dir) or not target.is_file():
            return connection.respond(404, "not found\n")
        body = target.read_bytes()
        ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        headers = Headers(
            [("Content-Type", ctype), ("Content-Length", str(len(body)))]
        )
        return Response(200, "OK", headers, body)

    # ------------------------------------------------------------ websocket

    def _handle(self, connection) -> None:
        subs = {}
        send_lock = threading.Lock()

        def pump(topic, sub):
            try:
                while True:
                    batch = sub.recv()
                    if not batch and (sub.closed or self.bus.closed):
                        return
                    for env in batch:
                        with send_lock:
                            connection.send(encode_frame(env))
            except (ConnectionClosed, BusClosedError):
                return

        try:
            for message in connection:
                if isinstance(message, bytes):
                    try:
                        env, rest = decode_frame(message)
                        if rest:
                            raise FrameError("trailing bytes after frame")
                    except FrameError:
                        connection.close(CloseCode.PROTOCOL_ERROR, "bad frame")
                        return
                    self.bus.publish_envelope(env)
                    continue
                try:
                    ctrl = json.loads(message)
                    op = ctrl["op"]
                    topic = ctrl["topic"]
                    if op not in ("sub", "unsub") or not isinstance(topic, str):
                        raise ValueError(op)
                except (ValueError, KeyError, TypeError):
                    connection.close(CloseCode.PROTOCOL_ERROR, "bad control frame")
                    return
                if op == "sub" and topic not in subs:
                    sub = self.bus.subscribe(topic, _client_mode(topic))
                    subs[topic] = sub
                    threading.Thread(
                        target=pump, args=(topic, sub), name=f"bridge-{topic}", daemon=True
                    ).start()
                elif op == "unsub" and topic in subs:
                    subs.pop(topic).unsubscribe()
        except ConnectionClosed:
            pass
        except BusClosedError:
            pass
        finally:
            for sub in subs.values():
                sub.unsubscribe()
