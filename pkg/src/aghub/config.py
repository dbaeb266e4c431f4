"""Service configuration: data root, listen address, executor profiles.

Values come from an optional JSON config file with environment-variable
overrides (AGHUB_DATA_ROOT, AGHUB_HOST, AGHUB_PORT, AGHUB_ADMIN_KEY).
The admin key authorizes account creation; if neither the environment
nor the config provides one, a random key is generated once and kept in
``<data_root>/admin_key`` so restarts keep working.
"""

from __future__ import annotations

import json
import os
import secrets
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

from .execution import DEFAULT_PROFILES, ExecutorProfile


@dataclass
class ServiceConfig:
    data_root: Path = Path("aghub-data")
    host: str = "127.0.0.1"
    port: int = 8787
    admin_key: Optional[str] = None
    max_workers: int = 4
    profiles: Dict[str, ExecutorProfile] = field(
        default_factory=lambda: dict(DEFAULT_PROFILES)
    )

    @classmethod
    def load(cls, config_path: Optional[str] = None) -> "ServiceConfig":
        cfg = cls()
        raw: Dict[str, Any] = {}
        if config_path:
            raw = json.loads(Path(config_path).read_text(encoding="utf-8"))
        if "data_root" in raw:
            cfg.data_root = Path(raw["data_root"])
        cfg.host = raw.get("host", cfg.host)
        cfg.port = int(raw.get("port", cfg.port))
        cfg.admin_key = raw.get("admin_key", cfg.admin_key)
        cfg.max_workers = int(raw.get("max_workers", cfg.max_workers))
        for name, prof in raw.get("profiles", {}).items():
            cfg.profiles[name] = ExecutorProfile(
                name=name,
                command=list(prof["command"]),
                timeout_s=float(prof.get("timeout_s", 60.0)),
                max_output_bytes=int(prof.get("max_output_bytes", 65536)),
            )
        if os.environ.get("AGHUB_DATA_ROOT"):
            cfg.data_root = Path(os.environ["AGHUB_DATA_ROOT"])
        cfg.host = os.environ.get("AGHUB_HOST", cfg.host)
        cfg.port = int(os.environ.get("AGHUB_PORT", cfg.port))
        cfg.admin_key = os.environ.get("AGHUB_ADMIN_KEY", cfg.admin_key)
        return cfg

    def resolve_admin_key(self) -> str:
        if self.admin_key:
            return self.admin_key
        key_file = Path(self.data_root) / "admin_key"
        if key_file.exists():
            self.admin_key = key_file.read_text(encoding="utf-8").strip()
        else:
            key_file.parent.mkdir(parents=True, exist_ok=True)
            self.admin_key = secrets.token_hex(32)
            key_file.write_text(self.admin_key + "\n", encoding="utf-8")
            key_file.chmod(0o600)
        return self.admin_key
