"""Command-line portal: a thin HTTP client with full API parity.

Configuration comes from ``--url``/``--key``, the AGHUB_URL / AGHUB_KEY
environment variables, or ``~/.config/aghub/config.json``.  The API key
is never printed.  ``--json`` emits the raw response body byte-for-byte;
the default output is a small human-readable rendering.

Exit codes: 0 success, 2 bad request, 3 unauthorized, 4 not found,
5 conflict, 6 server error, 7 transport failure.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import click
import httpx

EXIT_CODES = {
    "bad_request": 2,
    "unauthorized": 3,
    "not_found": 4,
    "conflict": 5,
    "internal": 6,
}
TRANSPORT_EXIT = 7

# CLI command <-> API endpoint parity table; the capability-matrix test
# checks both directions.
CAPABILITY_MATRIX: List[Tuple[str, str, str]] = [
    ("serve", "", ""),  # hosts the service itself
    ("user", "POST", "/api_create_user"),
    ("whoami", "GET", "/api_whoami"),
    ("up", "POST", "/api_upload"),
    ("mkdir", "POST", "/api_mkdir"),
    ("ls", "GET", "/api_list_sub_items"),
    ("cat", "GET", "/api_content"),
    ("meta", "GET", "/api_meta_data"),
    ("meta", "POST", "/api_update_meta"),
    ("search", "GET", "/api_search"),
    ("tool", "POST", "/api_argspec"),
    ("tool", "GET", "/api_argspec"),
    ("run", "POST", "/api_run"),
    ("runs", "GET", "/api_runs"),
    ("status", "GET", "/api_run_status"),
    ("cancel", "POST", "/api_run_cancel"),
    ("pipeline", "GET", "/api_pipeline"),
    ("publish", "POST", "/api_visibility"),
    ("unpublish", "POST", "/api_visibility"),
    ("coll", "POST", "/api_collection"),
    ("coll", "GET", "/api_collection"),
    ("rm", "POST", "/api_delete"),
    ("mv", "POST", "/api_move"),
    ("cp", "POST", "/api_copy"),
]


def _load_file_config() -> Dict[str, str]:
    path = Path.home() / ".config" / "aghub" / "config.json"
    if path.exists():
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError):
            return {}
    return {}


class ApiClient:
    def __init__(self, url: str, key: str, raw_json: bool):
        self.url = url.rstrip("/")
        self.key = key
        self.raw_json = raw_json
        self._client = httpx.Client(base_url=self.url, timeout=60.0)

    def request(self, method: str, path: str, *, params: Optional[Dict] = None,
                body: Optional[Dict] = None, content: Optional[bytes] = None) -> httpx.Response:
        headers = {"X-Api-Key": self.key}
        try:
            resp = self._client.request(
                method, path, params=params, json=body, content=content, headers=headers
            )
        except httpx.HTTPError as exc:
            click.echo(f"transport error: {exc}", err=True)
            sys.exit(TRANSPORT_EXIT)
        if resp.status_code >= 400:
            self._fail(resp)
        return resp

    def _fail(self, resp: httpx.Response) -> None:
        try:
            envelope = resp.json()["error"]
            code, message = envelope["code"], envelope["message"]
        except (ValueError, KeyError):
            code, message = "internal", resp.text[:200]
        click.echo(f"error ({code}): {message}", err=True)
        sys.exit(EXIT_CODES.get(code, TRANSPORT_EXIT))

    def emit(self, resp: httpx.Response, render=None) -> None:
        if self.raw_json or render is None:
            sys.stdout.buffer.write(resp.content)
            sys.stdout.buffer.flush()
        else:
            render(resp.json())


pass_client = click.make_pass_decorator(ApiClient)


@click.group()
@click.option("--url", default=None, help="Service URL (or AGHUB_URL).")
@click.option("--key", default=None, help="API key (or AGHUB_KEY).")
@click.option("--json", "raw_json", is_flag=True, help="Print raw canonical JSON bodies.")
@click.pass_context
def main(ctx: click.Context, url: Optional[str], key: Optional[str], raw_json: bool):
    """Agricultural data hub client."""
    file_cfg = _load_file_config()
    url = url or os.environ.get("AGHUB_URL") or file_cfg.get("url") or "http://127.0.0.1:8787"
    key = key or os.environ.get("AGHUB_KEY") or file_cfg.get("key") or ""
    ctx.obj = ApiClient(url, key, raw_json)


# -- service ------------------------------------------------------------------


@main.command()
@click.option("--config", "config_path", default=None, help="JSON config file.")
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.option("--data-root", default=None)
def serve(config_path, host, port, data_root):
    """Run the API service in the foreground."""
    import uvicorn

    from .config import ServiceConfig
    from .service import create_app_from_config

    cfg = ServiceConfig.load(config_path)
    if host:
        cfg.host = host
    if port:
        cfg.port = port
    if data_root:
        cfg.data_root = Path(data_root)
    app = create_app_from_config(cfg)
    uvicorn.run(app, host=cfg.host, port=cfg.port, log_level="warning")


# -- accounts -------------------------------------------------------------------


@main.group()
def user():
    """Account administration (admin key required)."""


@user.command("create")
@click.argument("username")
@pass_client
def user_create(client: ApiClient, username: str):
    resp = client.request("POST", "/api_create_user", body={"username": username})
    client.emit(resp)
    if not client.raw_json:
        click.echo()


@main.command()
@pass_client
def whoami(client: ApiClient):
    resp = client.request("GET", "/api_whoami")
    client.emit(resp, lambda d: click.echo(d["username"]))


# -- files ---------------------------------------------------------------------


def _doc_lines(doc: Dict[str, Any]) -> str:
    return "\n".join(f"{k}: {json.dumps(doc[k], ensure_ascii=False)}" for k in sorted(doc))


@main.command()
@click.argument("local", type=click.Path(exists=True, dir_okay=False))
@click.argument("path")
@click.option("--mode", default="data", type=click.Choice(["data", "tool", "model"]))
@pass_client
def up(client: ApiClient, local: str, path: str, mode: str):
    """Upload a local file to a logical path."""
    data = Path(local).read_bytes()
    resp = client.request("POST", "/api_upload", params={"path": path, "mode": mode}, content=data)
    client.emit(resp, lambda d: click.echo(f"{d['entity_id']} {d['path']}"))


@main.command()
@click.argument("path")
@click.option("--mode", default="data", type=click.Choice(["data", "tool", "model", "collection"]))
@pass_client
def mkdir(client: ApiClient, path: str, mode: str):
    """Create a folder (or collection with --mode collection)."""
    resp = client.request("POST", "/api_mkdir", body={"path": path, "mode": mode})
    client.emit(resp, lambda d: click.echo(f"{d['entity_id']} {d['path']}"))


@main.command()
@click.argument("path")
@pass_client
def ls(client: ApiClient, path: str):
    """List children of a path."""
    resp = client.request("GET", "/api_list_sub_items", params={"path": path})

    def render(docs):
        for d in docs:
            kind = "dir " if d["is_folder"] else "file"
            click.echo(f"{kind} {d['mode']:<10} {d['privilege']:<7} {d['path']}")

    client.emit(resp, render)


@main.command()
@click.argument("path")
@pass_client
def cat(client: ApiClient, path: str):
    """Print file content bytes."""
    resp = client.request("GET", "/api_content", params={"path": path})
    sys.stdout.buffer.write(resp.content)
    sys.stdout.buffer.flush()


@main.group()
def meta():
    """Read or update metadata."""


@meta.command("get")
@click.argument("path")
@pass_client
def meta_get(client: ApiClient, path: str):
    resp = client.request("GET", "/api_meta_data", params={"path": path})
    client.emit(resp, lambda d: click.echo(_doc_lines(d)))


def _parse_kv(pairs: Tuple[str, ...]) -> Dict[str, Any]:
    patch: Dict[str, Any] = {}
    for pair in pairs:
        if "=" not in pair:
            raise click.UsageError(f"expected key=value, got {pair!r}")
        key, raw = pair.split("=", 1)
        try:
            value: Any = json.loads(raw)
        except ValueError:
            value = raw
        if key == "labels" and isinstance(value, str):
            value = [v for v in value.split(",") if v]
        patch[key] = value
    return patch


@meta.command("set")
@click.argument("path")
@click.argument("pairs", nargs=-1, required=True)
@pass_client
def meta_set(client: ApiClient, path: str, pairs: Tuple[str, ...]):
    """Update metadata fields, e.g. category=soil labels=maize,2021."""
    patch = _parse_kv(pairs)
    resp = client.request("POST", "/api_update_meta", body={"path": path, "patch": patch})
    client.emit(resp, lambda d: click.echo(_doc_lines(d)))


# -- search ----------------------------------------------------------------------


@main.command()
@click.argument("query")
@click.option("-k", default=10, show_default=True)
@click.option("--mode", default=None)
@click.option("--format", "format_", default=None)
@click.option("--category", default=None)
@click.option("--label", multiple=True)
@click.option("--public", "privilege", flag_value="public")
@click.option("--private", "privilege", flag_value="private")
@click.option("--realtime/--no-realtime", default=None)
@click.option("--from", "time_from", type=float, default=None)
@click.option("--to", "time_to", type=float, default=None)
@click.option("--bbox", default=None, help="min_lat,min_lon,max_lat,max_lon")
@pass_client
def search(client, query, k, mode, format_, category, label, privilege, realtime,
           time_from, time_to, bbox):
    """Semantic search with optional facet filters."""
    params: Dict[str, Any] = {"q": query, "k": k}
    if mode:
        params["mode"] = mode
    if format_:
        params["format"] = format_
    if category:
        params["category"] = category
    if label:
        params["label"] = list(label)
    if privilege:
        params["privilege"] = privilege
    if realtime is not None:
        params["realtime"] = realtime
    if time_from is not None:
        params["from"] = time_from
    if time_to is not None:
        params["to"] = time_to
    if bbox:
        params["bbox"] = bbox
    resp = client.request("GET", "/api_search", params=params)

    def render(payload):
        for hit in payload["hits"]:
            click.echo(f"{hit['similarity']:+.4f} {hit['mode']:<10} {hit['path']}")

    client.emit(resp, render)


# -- tools and runs -----------------------------------------------------------------


def _parse_argspec(specs: Tuple[str, ...]) -> List[Dict[str, Any]]:
    parsed = []
    for spec in specs:
        default: Any = None
        if "=" in spec:
            spec, raw = spec.split("=", 1)
            try:
                default = json.loads(raw)
            except ValueError:
                default = raw
        parts = spec.split(":")
        if len(parts) < 2:
            raise click.UsageError(f"expected name:kind[:required], got {spec!r}")
        name, kind = parts[0], parts[1]
        required = len(parts) > 2 and parts[2] == "required"
        parsed.append({"name": name, "kind": kind, "required": required, "default": default})
    return parsed


@main.group()
def tool():
    """Inspect or edit a tool's argument spec."""


@tool.command("set")
@click.argument("path")
@click.option("--arg", "args_", multiple=True, help="name:kind[:required][=default]")
@click.option("--profile", default="python3", show_default=True)
@pass_client
def tool_set(client: ApiClient, path: str, args_: Tuple[str, ...], profile: str):
    body = {"tool": path, "argspec": _parse_argspec(args_), "executor_profile": profile}
    resp = client.request("POST", "/api_argspec", body=body)
    client.emit(resp, lambda d: click.echo(_doc_lines(d)))


@tool.command("get")
@click.argument("path")
@pass_client
def tool_get(client: ApiClient, path: str):
    resp = client.request("GET", "/api_argspec", params={"tool": path})
    client.emit(resp, lambda d: click.echo(_doc_lines(d)))


def _render_run(d: Dict[str, Any]) -> None:
    click.echo(
        f"run {d['run_id']}\n  container: {d['container_id']}\n  image: {d['image']}\n"
        f"  status: {d['status']}\n  running_time: {d['running_time']:.2f}s\n"
        f"  outputs: {d['output_ids']}"
    )


@main.command()
@click.argument("tool_path")
@click.option("--arg", "bindings", multiple=True, help="name=value")
@click.option("--output-mode", default="data", type=click.Choice(["data", "model"]))
@click.option("--wait/--no-wait", default=False, help="Poll until the run finishes.")
@pass_client
def run(client: ApiClient, tool_path: str, bindings: Tuple[str, ...], output_mode: str, wait: bool):
    """Launch a sandboxed tool run."""
    body = {"tool": tool_path, "bindings": _parse_kv(bindings), "output_mode": output_mode}
    resp = client.request("POST", "/api_run", body=body)
    record = resp.json()
    if wait:
        import time as _time

        while record["status"] in ("queued", "running"):
            _time.sleep(0.2)
            resp = client.request("GET", "/api_run_status", params={"run_id": record["run_id"]})
            record = resp.json()
    client.emit(resp, _render_run)


@main.command()
@click.argument("tool_path")
@pass_client
def runs(client: ApiClient, tool_path: str):
    """List runs of a tool, newest first."""
    resp = client.request("GET", "/api_runs", params={"tool": tool_path})

    def render(records):
        for d in records:
            click.echo(f"{d['run_id']} {d['status']:<10} {d['running_time']:.2f}s {d['image']}")

    client.emit(resp, render)


@main.command()
@click.argument("run_id")
@pass_client
def status(client: ApiClient, run_id: str):
    """Show one run record."""
    resp = client.request("GET", "/api_run_status", params={"run_id": run_id})
    client.emit(resp, _render_run)


@main.command()
@click.argument("run_id")
@pass_client
def cancel(client: ApiClient, run_id: str):
    """Cancel a queued or running run."""
    resp = client.request("POST", "/api_run_cancel", body={"run_id": run_id})
    client.emit(resp, _render_run)


# -- provenance --------------------------------------------------------------------


@main.command()
@click.argument("path")
@click.option("--depth", default=5, show_default=True)
@click.option("--dot", "dot_only", is_flag=True, help="Print DOT graph text.")
@pass_client
def pipeline(client: ApiClient, path: str, depth: int, dot_only: bool):
    """Show the provenance pipeline around a path."""
    resp = client.request("GET", "/api_pipeline", params={"path": path, "depth": depth})
    if dot_only and not client.raw_json:
        click.echo(resp.json()["dot"], nl=False)
        return

    def render(view):
        for node in view["nodes"]:
            flag = " [deleted]" if node["deleted"] else ""
            click.echo(f"node {node['entity_id']} {node['path_at_creation']}{flag}")
        for edge in view["edges"]:
            click.echo(
                f"edge {edge['kind']} inputs={edge['inputs']} outputs={edge['outputs']}"
            )
        if view["truncated"]:
            click.echo("(truncated)")

    client.emit(resp, render)


# -- visibility ----------------------------------------------------------------------


def _set_visibility(client: ApiClient, path: str, privilege: str) -> None:
    resp = client.request("POST", "/api_visibility", body={"path": path, "privilege": privilege})
    client.emit(resp, lambda d: click.echo("\n".join(d["affected"])))


@main.command()
@click.argument("path")
@pass_client
def publish(client: ApiClient, path: str):
    """Recursively make a subtree public."""
    _set_visibility(client, path, "public")


@main.command()
@click.argument("path")
@pass_client
def unpublish(client: ApiClient, path: str):
    """Recursively make a subtree private."""
    _set_visibility(client, path, "private")


# -- collections ---------------------------------------------------------------------


@main.group()
def coll():
    """Manage collections."""


@coll.command("create")
@click.argument("path")
@pass_client
def coll_create(client: ApiClient, path: str):
    resp = client.request("POST", "/api_collection", body={"action": "create", "path": path})
    client.emit(resp, lambda d: click.echo(d["entity_id"]))


@coll.command("add")
@click.argument("collection")
@click.argument("member")
@pass_client
def coll_add(client: ApiClient, collection: str, member: str):
    resp = client.request(
        "POST", "/api_collection",
        body={"action": "add", "path": collection, "member": member},
    )
    client.emit(resp, lambda d: click.echo(f"{len(d['members'])} members"))


@coll.command("rm")
@click.argument("collection")
@click.argument("member")
@pass_client
def coll_rm(client: ApiClient, collection: str, member: str):
    resp = client.request(
        "POST", "/api_collection",
        body={"action": "remove", "path": collection, "member": member},
    )
    client.emit(resp, lambda d: click.echo(f"{len(d['members'])} members"))


@coll.command("ls")
@click.argument("path")
@pass_client
def coll_ls(client: ApiClient, path: str):
    resp = client.request("GET", "/api_collection", params={"path": path})

    def render(payload):
        for d in payload["members"]:
            click.echo(f"{d['mode']:<10} {d['path']}")

    client.emit(resp, render)


# -- destructive ops --------------------------------------------------------------------


@main.command()
@click.argument("path")
@pass_client
def rm(client: ApiClient, path: str):
    """Delete an entity and its descendants."""
    resp = client.request("POST", "/api_delete", body={"path": path})
    client.emit(resp, lambda d: click.echo(f"removed {len(d['removed'])}"))


@main.command()
@click.argument("src")
@click.argument("dst")
@pass_client
def mv(client: ApiClient, src: str, dst: str):
    """Move an entity (id is preserved)."""
    resp = client.request("POST", "/api_move", body={"src": src, "dst": dst})
    client.emit(resp, lambda d: click.echo(d["path"]))


@main.command()
@click.argument("src")
@click.argument("dst")
@pass_client
def cp(client: ApiClient, src: str, dst: str):
    """Copy an entity (fresh id, reset to private)."""
    resp = client.request("POST", "/api_copy", body={"src": src, "dst": dst})
    client.emit(resp, lambda d: click.echo(d["entity_id"]))


if __name__ == "__main__":
    main()
