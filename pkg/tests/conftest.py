from __future__ import annotations

import socket
import threading
import time
from pathlib import Path

import pytest
import uvicorn

from aghub.hub import Hub
from aghub.service import create_app

from helpers import sequential_ids, sequential_keys, ticking_clock


@pytest.fixture
def hub(tmp_path):
    h = Hub(tmp_path / "data")
    yield h
    h.close()


@pytest.fixture
def make_hub(tmp_path):
    """Factory for hubs over arbitrary roots (restart tests reuse a root)."""
    created = []

    def factory(root=None, deterministic=False, **kwargs) -> Hub:
        root = Path(root) if root else tmp_path / f"data{len(created)}"
        if deterministic:
            kwargs.setdefault("id_factory", sequential_ids())
            kwargs.setdefault("key_factory", sequential_keys())
            kwargs.setdefault("clock", ticking_clock())
        h = Hub(root, **kwargs)
        created.append(h)
        return h

    yield factory
    for h in created:
        h.close()


class LiveServer:
    def __init__(self, hub: Hub, admin_key: str):
        self.hub = hub
        self.admin_key = admin_key
        sock = socket.socket()
        sock.bind(("127.0.0.1", 0))
        self.port = sock.getsockname()[1]
        sock.close()
        self.url = f"http://127.0.0.1:{self.port}"
        app = create_app(hub, admin_key)
        config = uvicorn.Config(app, host="127.0.0.1", port=self.port, log_level="error")
        self._server = uvicorn.Server(config)
        self._thread = threading.Thread(target=self._server.run, daemon=True)

    def start(self):
        self._thread.start()
        deadline = time.monotonic() + 10
        while not self._server.started:
            if time.monotonic() > deadline:
                raise RuntimeError("server did not start")
            time.sleep(0.02)
        return self

    def stop(self):
        self._server.should_exit = True
        self._thread.join(timeout=10)


@pytest.fixture
def make_server(make_hub):
    servers = []

    def factory(root=None, profiles=None, admin_key="test-admin-key", **kwargs) -> LiveServer:
        h = make_hub(root, profiles=profiles, **kwargs)
        server = LiveServer(h, admin_key).start()
        servers.append(server)
        return server

    yield factory
    for server in servers:
        server.stop()
