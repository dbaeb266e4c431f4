import json
import time
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from aghub.service import create_app

from helpers import grid_to_csv, ndvi_expected, csv_to_grid, NDVI_TOOL_SOURCE

GOLDEN_DIR = Path(__file__).parent / "goldens"
ADMIN = "test-admin-key"


@pytest.fixture
def client(hub):
    app = create_app(hub, ADMIN)
    with TestClient(app, raise_server_exceptions=False) as tc:
        yield tc


def create_user(client, username):
    resp = client.post("/api_create_user", json={"username": username}, params={"key": ADMIN})
    assert resp.status_code == 201
    return resp.json()["api_key"]


def build_paper_world(hub):
    """Deterministic world shaped like the documented API examples."""
    catalog = hub.catalog
    owner = catalog.create_user("username")
    catalog.create_folder("username", "/username/ag_data/green")
    catalog.upload_entity(
        "username",
        "/username/ag_data/green/21_E1801_AI03_index_green.shp",
        "data",
        b"fake shapefile bytes",
        meta_patch={
            "category": "imagery",
            "labels": {"green", "index"},
            "description": "green band index map",
            "geo": {"lat": 41.15, "lon": -96.47},
        },
    )
    catalog.upload_entity(
        "username",
        "/username/ag_data/green/21_E1801_A103_rgba_green.png",
        "data",
        b"fake png bytes",
        meta_patch={"labels": {"green"}},
    )
    partner = catalog.create_user("partner")
    catalog.upload_entity("partner", "/partner/ag_data/shared.csv", "data", b"a,b\n1,2\n")
    catalog.set_visibility("partner", "/partner/ag_data/shared.csv", "public")
    return owner, partner


class TestPaperEndpoints:
    def test_meta_data_by_path(self, hub, client):
        owner, _ = build_paper_world(hub)
        resp = client.get(
            "/api_meta_data",
            params={"path": "/username/ag_data/green/21_E1801_AI03_index_green.shp",
                    "key": owner.api_key},
        )
        assert resp.status_code == 200
        doc = resp.json()
        assert doc["path"] == "/username/ag_data/green/21_E1801_AI03_index_green.shp"
        assert doc["format"] == "shp"
        assert doc["mode"] == "data"

    def test_canonical_body_sorted_keys(self, hub, client):
        owner, _ = build_paper_world(hub)
        resp = client.get(
            "/api_meta_data",
            params={"path": "/username/ag_data/green/21_E1801_A103_rgba_green.png",
                    "key": owner.api_key},
        )
        payload = resp.content.decode()
        keys = list(json.loads(payload))
        assert keys == sorted(keys)
        assert ": " not in payload and ", " not in payload

    def test_bad_key_unauthorized(self, hub, client):
        build_paper_world(hub)
        resp = client.get(
            "/api_meta_data",
            params={"path": "/username/ag_data/green", "key": "bogus"},
        )
        assert resp.status_code == 401
        assert resp.json() == {
            "error": {"code": "unauthorized", "message": "unauthorized: missing or invalid key"}
        }

    def test_foreign_private_path_not_found(self, hub, client):
        owner, partner = build_paper_world(hub)
        resp = client.get(
            "/api_list_sub_items",
            params={"path": "/username/ag_data/green", "key": partner.api_key},
        )
        assert resp.status_code == 404
        assert resp.json()["error"]["code"] == "not_found"

    def test_list_sub_items(self, hub, client):
        owner, _ = build_paper_world(hub)
        resp = client.get(
            "/api_list_sub_items",
            params={"path": "/username/ag_data/green", "key": owner.api_key},
        )
        assert resp.status_code == 200
        paths = [d["path"] for d in resp.json()]
        assert paths == sorted(paths)
        assert "/username/ag_data/green/21_E1801_AI03_index_green.shp" in paths

    def test_empty_folder_is_empty_array(self, hub, client):
        owner, _ = build_paper_world(hub)
        hub.catalog.create_folder("username", "/username/ag_data/empty")
        resp = client.get(
            "/api_list_sub_items",
            params={"path": "/username/ag_data/empty", "key": owner.api_key},
        )
        assert resp.content == b"[]"

    def test_public_data_virtual_path(self, hub, client):
        owner, _ = build_paper_world(hub)
        resp = client.get(
            "/api_list_sub_items",
            params={"path": "/username/ag_data/public_data", "key": owner.api_key},
        )
        assert [d["path"] for d in resp.json()] == [
            "/username/ag_data/public_data/partner/shared.csv"
        ]


class TestGoldenFiles:
    """Byte-exact bodies for the two documented endpoints.

    The world is rebuilt with seeded id/key/clock factories, so the
    checked-in golden bytes must match on every machine and across
    service restarts over the same data root.
    """

    def _world(self, make_hub, root=None):
        hub = make_hub(root, deterministic=True)
        if not hub.catalog.user_exists("username"):
            build_paper_world(hub)
        return hub

    def _fetch(self, hub, url):
        app = create_app(hub, ADMIN)
        with TestClient(app) as tc:
            key = hub.catalog.account("username").api_key
            resp = tc.get(f"{url}&key={key}")
            assert resp.status_code == 200
            return resp.content

    META_URL = "/api_meta_data?path=/username/ag_data/green/21_E1801_AI03_index_green.shp"
    LIST_URL = "/api_list_sub_items?path=/username/ag_data/green"

    def test_meta_data_matches_golden(self, make_hub):
        hub = self._world(make_hub)
        body = self._fetch(hub, self.META_URL)
        assert body == (GOLDEN_DIR / "api_meta_data.json").read_bytes()

    def test_list_sub_items_matches_golden(self, make_hub):
        hub = self._world(make_hub)
        body = self._fetch(hub, self.LIST_URL)
        assert body == (GOLDEN_DIR / "api_list_sub_items.json").read_bytes()

    def test_bytes_stable_across_restart(self, make_hub, tmp_path):
        root = tmp_path / "restartable"
        hub = self._world(make_hub, root)
        first_meta = self._fetch(hub, self.META_URL)
        first_list = self._fetch(hub, self.LIST_URL)
        hub.close()
        reopened = self._world(make_hub, root)
        assert self._fetch(reopened, self.META_URL) == first_meta
        assert self._fetch(reopened, self.LIST_URL) == first_list


class TestAuthTotality:
    MUTATING = [
        ("POST", "/api_upload?path=/alice/ag_data/x.csv&mode=data", None, b"1"),
        ("POST", "/api_mkdir", {"path": "/alice/ag_data/d"}, None),
        ("POST", "/api_update_meta", {"path": "/alice/ag_data", "patch": {}}, None),
        ("POST", "/api_visibility", {"path": "/alice/ag_data", "privilege": "public"}, None),
        ("POST", "/api_delete", {"path": "/alice/ag_data"}, None),
        ("POST", "/api_move", {"src": "/alice/ag_data", "dst": "/alice/x"}, None),
        ("POST", "/api_copy", {"src": "/alice/ag_data", "dst": "/alice/x"}, None),
        ("POST", "/api_collection", {"action": "create", "path": "/alice/ag_data/c"}, None),
        ("POST", "/api_argspec", {"tool": "/alice/ag_data/t.py"}, None),
        ("POST", "/api_run", {"tool": "/alice/ag_data/t.py"}, None),
        ("POST", "/api_run_cancel", {"run_id": "r"}, None),
        ("POST", "/api_create_user", {"username": "mallory"}, None),
    ]
    READING = [
        ("GET", "/api_meta_data?path=/alice/ag_data", None, None),
        ("GET", "/api_list_sub_items?path=/alice/ag_data", None, None),
        ("GET", "/api_search?q=x", None, None),
        ("GET", "/api_content?path=/alice/ag_data/x.csv", None, None),
        ("GET", "/api_collection?path=/alice/ag_data/c", None, None),
        ("GET", "/api_argspec?tool=/alice/ag_data/t.py", None, None),
        ("GET", "/api_run_status?run_id=r", None, None),
        ("GET", "/api_runs?tool=/alice/ag_data/t.py", None, None),
        ("GET", "/api_pipeline?path=/alice/ag_data", None, None),
        ("GET", "/api_whoami", None, None),
    ]

    @pytest.mark.parametrize("method,url,body,content", MUTATING + READING)
    def test_missing_key_rejected_without_state_change(self, hub, client, method, url, body, content):
        create_user(client, "alice")
        before = [d.to_doc() for d in hub.catalog.all_docs()]
        resp = client.request(method, url, json=body, content=content)
        assert resp.status_code == 401
        assert resp.json()["error"]["code"] == "unauthorized"
        assert [d.to_doc() for d in hub.catalog.all_docs()] == before

    def test_route_coverage_is_total(self, client):
        # every /api_* route must appear in the auth-totality matrix
        covered = {u.split("?")[0] for _, u, _, _ in self.MUTATING + self.READING}
        app_routes = {
            r.path for r in client.app.routes if r.path.startswith("/api_")
        }
        assert app_routes == covered

    def test_wrong_admin_key_cannot_create_user(self, hub, client):
        resp = client.post(
            "/api_create_user", json={"username": "mallory"}, params={"key": "guess"}
        )
        assert resp.status_code == 401
        assert not hub.catalog.user_exists("mallory")


class TestPlumbingEndpoints:
    def test_search_with_mode_filter(self, hub, client):
        key = create_user(client, "alice")
        for i in range(7):
            client.post(
                f"/api_upload?path=/alice/ag_data/maize_{i}.csv&mode=data&key={key}",
                content=b"maize",
            )
        client.post(
            f"/api_upload?path=/alice/ag_data/tooling.py&mode=tool&key={key}",
            content=b"print()",
        )
        resp = client.get(
            "/api_search", params={"q": "maize", "mode": "data", "k": 5, "key": key}
        )
        payload = resp.json()
        assert len(payload["hits"]) == 5
        assert all(h["mode"] == "data" for h in payload["hits"])
        sims = [h["similarity"] for h in payload["hits"]]
        assert sims == sorted(sims, reverse=True)
        assert {p["entity_id"] for p in payload["projection"]} == {
            h["entity_id"] for h in payload["hits"]
        }

    def test_search_geo_payload(self, hub, client):
        key = create_user(client, "alice")
        client.post(f"/api_upload?path=/alice/ag_data/geo.csv&mode=data&key={key}", content=b"x")
        client.post(
            "/api_update_meta",
            json={"path": "/alice/ag_data/geo.csv", "patch": {"geo": {"lat": 41.0, "lon": -96.0}}},
            params={"key": key},
        )
        resp = client.get("/api_search", params={"q": "geo.csv", "k": 3, "key": key})
        geo = resp.json()["geo"]
        assert geo and geo[0]["lat"] == 41.0 and geo[0]["lon"] == -96.0

    def test_invalid_filter_bad_request(self, client):
        key = create_user(client, "alice")
        resp = client.get("/api_search", params={"q": "x", "bbox": "1,2,3", "key": key})
        assert resp.status_code == 400
        assert resp.json()["error"]["code"] == "bad_request"

    def test_run_roundtrip_via_api(self, hub, client):
        key = create_user(client, "alice")
        red = [[0.1, 0.2], [0.3, 0.4]]
        nir = [[0.5, 0.6], [0.7, 0.8]]
        client.post(
            f"/api_upload?path=/alice/ag_data/red.csv&mode=data&key={key}",
            content=grid_to_csv(red),
        )
        client.post(
            f"/api_upload?path=/alice/ag_data/nir.csv&mode=data&key={key}",
            content=grid_to_csv(nir),
        )
        client.post(
            f"/api_upload?path=/alice/ag_data/calculate_ndvi.py&mode=tool&key={key}",
            content=NDVI_TOOL_SOURCE.encode(),
        )
        resp = client.post(
            "/api_argspec",
            json={
                "tool": "/alice/ag_data/calculate_ndvi.py",
                "argspec": [
                    {"name": "red", "kind": "path_in", "required": True},
                    {"name": "nir", "kind": "path_in", "required": True},
                    {"name": "out", "kind": "path_out", "required": True},
                ],
            },
            params={"key": key},
        )
        assert resp.status_code == 200
        resp = client.post(
            "/api_run",
            json={
                "tool": "/alice/ag_data/calculate_ndvi.py",
                "bindings": {
                    "red": "/alice/ag_data/red.csv",
                    "nir": "/alice/ag_data/nir.csv",
                    "out": "/alice/ag_data/ndvi.csv",
                },
            },
            params={"key": key},
        )
        assert resp.status_code == 202
        run_id = resp.json()["run_id"]
        deadline = time.monotonic() + 30
        while True:
            record = client.get(
                "/api_run_status", params={"run_id": run_id, "key": key}
            ).json()
            if record["status"] in ("succeeded", "failed", "cancelled"):
                break
            assert time.monotonic() < deadline
            time.sleep(0.05)
        assert record["status"] == "succeeded"
        data = client.get(
            "/api_content", params={"path": "/alice/ag_data/ndvi.csv", "key": key}
        ).content
        got = csv_to_grid(data)
        expected = ndvi_expected(red, nir)
        assert all(
            abs(g - e) <= 1e-4 for gr, er in zip(got, expected) for g, e in zip(gr, er)
        )
        pipe = client.get(
            "/api_pipeline", params={"path": "/alice/ag_data/ndvi.csv", "depth": 1, "key": key}
        ).json()
        run_edges = [e for e in pipe["edges"] if e["kind"] == "tool_run"]
        assert len(run_edges) == 1
        assert len(run_edges[0]["inputs"]) == 2
        assert "digraph pipeline" in pipe["dot"]

    def test_visibility_returns_recursive_affected_set(self, hub, client):
        key = create_user(client, "alice")
        client.post("/api_mkdir", json={"path": "/alice/ag_data/d"}, params={"key": key})
        client.post(f"/api_upload?path=/alice/ag_data/d/a.csv&mode=data&key={key}", content=b"1")
        client.post(f"/api_upload?path=/alice/ag_data/d/b.csv&mode=data&key={key}", content=b"2")
        resp = client.post(
            "/api_visibility",
            json={"path": "/alice/ag_data/d", "privilege": "public"},
            params={"key": key},
        )
        assert sorted(resp.json()["affected"]) == [
            "/alice/ag_data/d", "/alice/ag_data/d/a.csv", "/alice/ag_data/d/b.csv"
        ]

    def test_error_mapping_conflict_and_not_found(self, client):
        key = create_user(client, "alice")
        client.post(f"/api_upload?path=/alice/ag_data/a.csv&mode=data&key={key}", content=b"1")
        resp = client.post(
            f"/api_upload?path=/alice/ag_data/a.csv&mode=data&key={key}", content=b"2"
        )
        assert resp.status_code == 409
        assert resp.json()["error"]["code"] == "conflict"
        resp = client.get("/api_meta_data", params={"path": "/alice/ag_data/nope", "key": key})
        assert resp.status_code == 404
        resp = client.post(
            "/api_update_meta",
            json={"path": "/alice/ag_data/a.csv", "patch": {"mode": "tool"}},
            params={"key": key},
        )
        assert resp.status_code == 400

    def test_key_accepted_in_header(self, client):
        key = create_user(client, "alice")
        resp = client.get(
            "/api_meta_data", params={"path": "/alice/ag_data"}, headers={"X-Api-Key": key}
        )
        assert resp.status_code == 200

    def test_unknown_route_uses_error_envelope(self, client):
        resp = client.get("/definitely_not_a_route")
        assert resp.status_code == 404
        body = resp.json()
        assert set(body) == {"error"} and set(body["error"]) == {"code", "message"}

    def test_malformed_body_uses_error_envelope(self, client):
        key = create_user(client, "alice")
        resp = client.post("/api_mkdir", json={"nope": 1}, params={"key": key})
        assert resp.status_code == 400
        assert resp.json()["error"]["code"] == "bad_request"

    def test_collection_flow(self, client):
        key = create_user(client, "alice")
        client.post(f"/api_upload?path=/alice/ag_data/a.csv&mode=data&key={key}", content=b"1")
        resp = client.post(
            "/api_collection",
            json={"action": "create", "path": "/alice/ag_data/set1"},
            params={"key": key},
        )
        assert resp.status_code == 201
        resp = client.post(
            "/api_collection",
            json={"action": "add", "path": "/alice/ag_data/set1", "member": "/alice/ag_data/a.csv"},
            params={"key": key},
        )
        assert [m["path"] for m in resp.json()["members"]] == ["/alice/ag_data/a.csv"]
        resp = client.get("/api_collection", params={"path": "/alice/ag_data/set1", "key": key})
        assert resp.json()["collection"]["mode"] == "collection"
