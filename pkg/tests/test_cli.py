import json

import httpx
import pytest
from click.testing import CliRunner

from aghub.cli import CAPABILITY_MATRIX, main
from aghub.hub import Hub
from aghub.service import create_app

from conftest import LiveServer
from helpers import NDVI_TOOL_SOURCE, grid_to_csv

ADMIN = "cli-admin-key"


@pytest.fixture(scope="module")
def server(tmp_path_factory):
    hub = Hub(tmp_path_factory.mktemp("cli") / "data")
    srv = LiveServer(hub, ADMIN).start()
    yield srv
    srv.stop()
    hub.close()


@pytest.fixture(scope="module")
def alice_key(server):
    resp = httpx.post(
        f"{server.url}/api_create_user",
        json={"username": "alice"},
        params={"key": ADMIN},
    )
    assert resp.status_code == 201
    return resp.json()["api_key"]


@pytest.fixture
def invoke(server, alice_key):
    runner = CliRunner()

    def call(*args, key=None, expect_exit=0):
        env = {"AGHUB_URL": server.url, "AGHUB_KEY": key or alice_key}
        result = runner.invoke(main, list(args), env=env, catch_exceptions=False)
        assert result.exit_code == expect_exit, result.output
        return result

    return call


class TestCapabilityMatrix:
    def test_every_cli_command_has_an_endpoint(self):
        commands = set(main.commands)
        covered = {cmd for cmd, _, _ in CAPABILITY_MATRIX}
        assert commands == covered

    def test_every_endpoint_has_a_cli_command(self, tmp_path):
        hub = Hub(tmp_path / "data")
        try:
            app = create_app(hub, "x")
            routes = {
                (list(r.methods - {"HEAD"})[0], r.path)
                for r in app.routes
                if r.path.startswith("/api_")
            }
            covered = {(m, e) for _, m, e in CAPABILITY_MATRIX if e}
            assert routes == covered
        finally:
            hub.close()


class TestFileCommands:
    def test_upload_mkdir_ls_cat(self, invoke, tmp_path):
        local = tmp_path / "file.csv"
        local.write_text("a,b\n1,2\n")
        invoke("mkdir", "/alice/ag_data/exp1")
        result = invoke("up", str(local), "/alice/ag_data/exp1/file.csv")
        assert "/alice/ag_data/exp1/file.csv" in result.output
        result = invoke("ls", "/alice/ag_data/exp1")
        assert "/alice/ag_data/exp1/file.csv" in result.output
        result = invoke("cat", "/alice/ag_data/exp1/file.csv")
        assert result.output == "a,b\n1,2\n"

    def test_ls_includes_public_data(self, invoke):
        result = invoke("ls", "/alice/ag_data")
        assert "/alice/ag_data/public_data" in result.output

    def test_meta_get_set(self, invoke, tmp_path):
        local = tmp_path / "m.csv"
        local.write_text("x")
        invoke("up", str(local), "/alice/ag_data/m.csv")
        invoke("meta", "set", "/alice/ag_data/m.csv", "category=soil", "labels=maize,2021")
        result = invoke("meta", "get", "/alice/ag_data/m.csv")
        assert '"soil"' in result.output
        assert '"maize"' in result.output

    def test_mv_cp_rm(self, invoke, tmp_path):
        local = tmp_path / "f.csv"
        local.write_text("1")
        invoke("up", str(local), "/alice/ag_data/f.csv")
        invoke("mv", "/alice/ag_data/f.csv", "/alice/ag_data/g.csv")
        invoke("cp", "/alice/ag_data/g.csv", "/alice/ag_data/h.csv")
        result = invoke("rm", "/alice/ag_data/h.csv")
        assert "removed 1" in result.output
        invoke("rm", "/alice/ag_data/g.csv")

    def test_publish_unpublish(self, invoke, tmp_path):
        local = tmp_path / "p.csv"
        local.write_text("1")
        invoke("up", str(local), "/alice/ag_data/p.csv")
        result = invoke("publish", "/alice/ag_data/p.csv")
        assert result.output.strip() == "/alice/ag_data/p.csv"
        invoke("unpublish", "/alice/ag_data/p.csv")
        invoke("rm", "/alice/ag_data/p.csv")


class TestJsonParity:
    def test_json_output_is_byte_identical_to_api_body(self, invoke, server, alice_key):
        result = invoke("--json", "meta", "get", "/alice/ag_data")
        direct = httpx.get(
            f"{server.url}/api_meta_data",
            params={"path": "/alice/ag_data", "key": alice_key},
        )
        assert result.stdout_bytes == direct.content

    def test_json_search_parity(self, invoke, server, alice_key):
        result = invoke("--json", "search", "ag_data", "-k", "3")
        direct = httpx.get(
            f"{server.url}/api_search",
            params={"q": "ag_data", "k": 3, "key": alice_key},
        )
        assert result.stdout_bytes == direct.content


class TestErrors:
    def test_not_found_exit_code(self, invoke):
        result = invoke("meta", "get", "/alice/ag_data/ghost.csv", expect_exit=4)
        assert "not_found" in result.output

    def test_unauthorized_exit_code(self, invoke):
        result = invoke("whoami", key="wrong-key", expect_exit=3)
        assert "unauthorized" in result.output

    def test_conflict_exit_code(self, invoke, tmp_path):
        local = tmp_path / "c.csv"
        local.write_text("1")
        invoke("up", str(local), "/alice/ag_data/c.csv")
        result = invoke("up", str(local), "/alice/ag_data/c.csv", expect_exit=5)
        assert "conflict" in result.output
        invoke("rm", "/alice/ag_data/c.csv")

    def test_key_never_echoed(self, invoke, alice_key):
        result = invoke("whoami")
        assert alice_key not in result.output
        result = invoke("meta", "get", "/alice/ag_data/ghost.csv", expect_exit=4)
        assert alice_key not in result.output


class TestRunFlow:
    def test_ndvi_tool_flow(self, invoke, tmp_path):
        red = tmp_path / "red.csv"
        nir = tmp_path / "nir.csv"
        tool = tmp_path / "calculate_ndvi.py"
        red.write_bytes(grid_to_csv([[0.1, 0.2], [0.3, 0.4]]))
        nir.write_bytes(grid_to_csv([[0.5, 0.6], [0.7, 0.8]]))
        tool.write_text(NDVI_TOOL_SOURCE)
        invoke("up", str(red), "/alice/ag_data/red.csv")
        invoke("up", str(nir), "/alice/ag_data/nir.csv")
        invoke("up", str(tool), "/alice/ag_data/calculate_ndvi.py", "--mode", "tool")
        invoke(
            "tool", "set", "/alice/ag_data/calculate_ndvi.py",
            "--arg", "red:path_in:required",
            "--arg", "nir:path_in:required",
            "--arg", "out:path_out:required",
        )
        result = invoke("tool", "get", "/alice/ag_data/calculate_ndvi.py")
        assert "path_in" in result.output
        result = invoke(
            "run", "/alice/ag_data/calculate_ndvi.py", "--wait",
            "--arg", "red=/alice/ag_data/red.csv",
            "--arg", "nir=/alice/ag_data/nir.csv",
            "--arg", "out=/alice/ag_data/ndvi.csv",
        )
        assert "status: succeeded" in result.output
        result = invoke("runs", "/alice/ag_data/calculate_ndvi.py")
        assert "succeeded" in result.output
        result = invoke("cat", "/alice/ag_data/ndvi.csv")
        assert result.output.splitlines()[0].startswith("0.666")

    def test_pipeline_dot(self, invoke):
        result = invoke("pipeline", "/alice/ag_data/ndvi.csv", "--depth", "1", "--dot")
        dot = result.output
        assert dot.startswith("digraph pipeline")
        assert dot.count("shape=ellipse") + dot.count("shape=doublecircle") == 3
        assert dot.count("tool_run") == 1

    def test_run_status_and_cancel_command(self, invoke, tmp_path):
        sleeper = tmp_path / "sleep.py"
        sleeper.write_text("import time\ntime.sleep(30)\n")
        invoke("up", str(sleeper), "/alice/ag_data/sleep.py", "--mode", "tool")
        invoke("tool", "set", "/alice/ag_data/sleep.py")
        result = invoke("--json", "run", "/alice/ag_data/sleep.py")
        run_id = json.loads(result.stdout_bytes)["run_id"]
        result = invoke("status", run_id)
        assert "status:" in result.output
        result = invoke("cancel", run_id)
        assert "cancelled" in result.output


class TestCollections:
    def test_coll_commands(self, invoke, tmp_path):
        local = tmp_path / "d.csv"
        local.write_text("1")
        invoke("up", str(local), "/alice/ag_data/member.csv")
        invoke("coll", "create", "/alice/ag_data/set2")
        invoke("coll", "add", "/alice/ag_data/set2", "/alice/ag_data/member.csv")
        result = invoke("coll", "ls", "/alice/ag_data/set2")
        assert "/alice/ag_data/member.csv" in result.output
        invoke("coll", "rm", "/alice/ag_data/set2", "/alice/ag_data/member.csv")
        result = invoke("coll", "ls", "/alice/ag_data/set2")
        assert "member.csv" not in result.output
