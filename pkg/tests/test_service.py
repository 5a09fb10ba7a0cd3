"""HTTP service contract: storage, versions, and compute endpoints."""

from __future__ import annotations

import json
import threading
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from ermodes.cli import main
from ermodes.fixtures import fixture_text
from ermodes.service import DiagramStore, StaleVersionError, create_app

DATA = Path(__file__).parent / "data"
GOLDEN_MODES = (DATA / "university.modes.golden").read_text()


@pytest.fixture()
def store_dir(tmp_path):
    return tmp_path / "store"


@pytest.fixture()
def client(store_dir):
    with TestClient(create_app(store_dir)) as c:
        yield c


def university_doc() -> dict:
    return json.loads(fixture_text("university"))


def put_university(client, diagram_id="uni") -> dict:
    response = client.put(f"/diagrams/{diagram_id}", json=university_doc())
    assert response.status_code == 200
    return response.json()


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_put_then_get_round_trips_with_version(client):
    body = put_university(client)
    assert body == {"id": "uni", "version": 1}
    fetched = client.get("/diagrams/uni").json()
    assert fetched["id"] == "uni"
    assert fetched["version"] == 1
    assert fetched["diagram"] == university_doc()


def test_listing_names_every_stored_diagram(client):
    assert client.get("/diagrams").json() == {"diagrams": []}
    put_university(client, "b")
    put_university(client, "a")
    put_university(client, "a")
    assert client.get("/diagrams").json() == {
        "diagrams": [{"id": "a", "version": 2}, {"id": "b", "version": 1}]}


def test_unknown_diagram_is_404(client):
    assert client.get("/diagrams/ghost").status_code == 404
    assert client.post("/diagrams/ghost/modes", json={}).status_code == 404


def test_invalid_ids_are_rejected(client):
    assert client.get("/diagrams/a.b").status_code == 400
    assert client.put("/diagrams/-x", json=university_doc()).status_code == 400


def test_put_validates_the_document(client):
    doc = university_doc()
    doc["entities"][0]["bogus"] = 1
    assert client.put("/diagrams/uni", json=doc).status_code == 400

    doc = university_doc()
    doc["extra"] = {}
    response = client.put("/diagrams/uni", json=doc)
    assert response.status_code == 400
    assert "unknown keys" in response.json()["detail"]

    doc = university_doc()
    doc["relationships"][0]["participants"][0] = "Dean"
    assert client.put("/diagrams/uni", json=doc).status_code == 400

    assert client.put("/diagrams/uni", json=[1, 2]).status_code in (400, 422)
    assert client.get("/diagrams/uni").status_code == 404


def test_put_canonicalizes_element_order(client):
    doc = university_doc()
    doc["entities"].reverse()
    doc["relationships"].reverse()
    client.put("/diagrams/uni", json=doc)
    assert client.get("/diagrams/uni").json()["diagram"] == university_doc()


def test_layout_is_stored_verbatim_and_ignored(client):
    doc = university_doc()
    doc["layout"] = {"Professor": {"x": 10, "y": 20}}
    client.put("/diagrams/uni", json=doc)
    fetched = client.get("/diagrams/uni").json()["diagram"]
    assert fetched["layout"] == {"Professor": {"x": 10, "y": 20}}
    response = client.post("/diagrams/uni/modes",
                           json={"config": {"strategy": "shortest"}})
    assert response.status_code == 200


def test_unversioned_put_is_last_write_wins(client):
    put_university(client)
    assert put_university(client)["version"] == 2
    assert put_university(client)["version"] == 3


def test_stale_base_version_conflicts(client):
    put_university(client)
    ok = client.put("/diagrams/uni", json=university_doc(),
                    headers={"X-Base-Version": "1"})
    assert ok.status_code == 200
    assert ok.json()["version"] == 2
    stale = client.put("/diagrams/uni", json=university_doc(),
                       headers={"X-Base-Version": "1"})
    assert stale.status_code == 409
    assert stale.json()["detail"] == {"error": "stale version", "current": 2}
    assert client.get("/diagrams/uni").json()["version"] == 2


def test_concurrent_writes_with_same_base_produce_one_winner(store_dir):
    store = DiagramStore(store_dir)
    store.put("uni", university_doc(), None)
    rounds = 5
    workers = 4
    for _ in range(rounds):
        base = store._version("uni")
        barrier = threading.Barrier(workers)
        outcomes: list[str] = []
        lock = threading.Lock()

        def attempt():
            barrier.wait()
            try:
                store.put("uni", university_doc(), base)
                result = "won"
            except StaleVersionError:
                result = "stale"
            with lock:
                outcomes.append(result)

        threads = [threading.Thread(target=attempt) for _ in range(workers)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert outcomes.count("won") == 1
        assert outcomes.count("stale") == workers - 1


def test_restart_preserves_documents_and_versions(store_dir):
    with TestClient(create_app(store_dir)) as client:
        put_university(client)
        put_university(client)
    with TestClient(create_app(store_dir)) as client:
        fetched = client.get("/diagrams/uni").json()
        assert fetched["version"] == 2
        assert fetched["diagram"] == university_doc()
        assert put_university(client)["version"] == 3


def test_hand_dropped_files_count_as_version_one(store_dir, client):
    store_dir.mkdir(parents=True, exist_ok=True)
    (store_dir / "dropped.erd.json").write_text(fixture_text("university"))
    fetched = client.get("/diagrams/dropped").json()
    assert fetched["version"] == 1


def test_modes_endpoint_matches_cli_bytes(client, tmp_path, capsys):
    put_university(client)
    response = client.post("/diagrams/uni/modes",
                           json={"config": {"strategy": "shortest"}})
    assert response.status_code == 200
    body = response.json()
    assert body["version"] == 1
    assert body["warnings"] == []
    assert body["modes"] == GOLDEN_MODES

    doc = tmp_path / "uni.erd.json"
    doc.write_text(fixture_text("university"))
    assert main(["gmc", "--diagram", str(doc)]) == 0
    assert capsys.readouterr().out == body["modes"]


def test_modes_endpoint_supports_dialects_and_rejects_unknown(client):
    put_university(client)
    aleph = client.post("/diagrams/uni/modes",
                        json={"config": {"strategy": "shortest"},
                              "dialect": "aleph"})
    assert aleph.json()["modes"].startswith(":- modeh(1, tenure(+professor))")
    assert client.post("/diagrams/uni/modes",
                       json={"dialect": "prolog"}).status_code == 400


def test_paths_endpoint_groups_by_feature(client):
    put_university(client)
    response = client.post("/diagrams/uni/paths",
                           json={"config": {"strategy": "shortest-all"}})
    assert response.status_code == 200
    results = response.json()["results"]
    assert len(results) == 1
    assert results[0]["feature"] == {"owner": "Takes", "name": "Grade"}
    assert [p["rendered"] for p in results[0]["paths"]] == [
        "Professor -[Advises]-> Student -[Takes]",
        "Professor -[Teaches]-> Course -[Takes]",
    ]
    assert all(p["relations"] == 2 for p in results[0]["paths"])


def test_random_paths_endpoint_is_reproducible(client):
    put_university(client)
    payload = {"config": {"strategy": "random", "seed": 11, "num_walks": 4,
                          "max_depth": 2}}
    first = client.post("/diagrams/uni/paths", json=payload).json()
    second = client.post("/diagrams/uni/paths", json=payload).json()
    assert first == second
    assert first["results"][0]["feature"] is None
    assert len(first["results"][0]["paths"]) == 4


def test_clausespace_endpoint_reports_counts(client):
    put_university(client)
    response = client.post("/diagrams/uni/clausespace",
                           json={"config": {"strategy": "shortest"},
                                 "max_len": 3})
    assert response.status_code == 200
    report = response.json()["report"]
    assert report == {
        "counts_by_length": {"0": 1, "1": 1, "2": 2, "3": 3},
        "total": 7,
        "truncated": False,
    }


def test_config_errors_are_400(client):
    put_university(client)
    bad = [
        {"config": {"strategy": "sideways"}},
        {"config": {"max_depth": 0}},
        {"config": {"walks": 2}},
        {"config": {"max_depth": True}},
        {"config": "shortest"},
    ]
    for payload in bad:
        response = client.post("/diagrams/uni/paths", json=payload)
        assert response.status_code == 400, payload
    assert client.post("/diagrams/uni/clausespace",
                       json={"max_len": True}).status_code == 400


def test_annotationless_diagrams_cannot_compute(client):
    doc = university_doc()
    doc["annotation"] = None
    assert client.put("/diagrams/bare", json=doc).status_code == 200
    assert client.post("/diagrams/bare/paths", json={}).status_code == 400
    assert client.post("/diagrams/bare/modes", json={}).status_code == 400


def test_every_response_carries_the_version(client):
    put_university(client)
    put_university(client)
    for url, method, payload in [
        ("/diagrams/uni", "get", None),
        ("/diagrams/uni/paths", "post", {}),
        ("/diagrams/uni/modes", "post", {}),
        ("/diagrams/uni/clausespace", "post", {"max_len": 1}),
    ]:
        if method == "get":
            body = client.get(url).json()
        else:
            body = client.post(url, json=payload).json()
        assert body["version"] == 2, url
