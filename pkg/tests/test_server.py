"""HTTP bridge: JSON endpoints over a live localhost server."""

import json
import threading
import urllib.request

import pytest

from conftest import build_fixture_net

from atcg.server import make_server


@pytest.fixture()
def login_server():
    net = build_fixture_net("login.xml")
    server = make_server(net, 0)  # OS-assigned free port
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    base = "http://127.0.0.1:%d" % server.server_address[1]
    yield base
    server.shutdown()
    server.server_close()
    thread.join(timeout=5)


def _get(base, path):
    with urllib.request.urlopen(base + path) as resp:
        return json.loads(resp.read())


def _post(base, path, payload):
    req = urllib.request.Request(base + path,
                                 data=json.dumps(payload).encode("utf-8"),
                                 headers={"Content-Type": "application/json"})
    with urllib.request.urlopen(req) as resp:
        return json.loads(resp.read())


def test_net_endpoint(login_server):
    net = _get(login_server, "/net")
    assert net["id"] == "login"
    assert sorted(p["id"] for p in net["places"]) == \
        ["P1", "P2", "P4", "P6", "name", "password"]
    assert [t["name"] for t in net["transitions"]] == \
        ["enterName", "enterPassword", "login"]
    assert len(net["arcs"]) == 14


def test_state_fire_reset_cycle(login_server):
    state = _get(login_server, "/state")
    assert [e["label"] for e in state["enabled"]] == ["enterName(UID)"]
    assert state["history"] == []
    assert state["marking"]["name"] == ["(UID)"]

    for expected in ("enterPassword(PSWD)", "login(UID, PSWD)", None):
        state = _post(login_server, "/fire", {"index": 0})
        if expected is not None:
            assert [e["label"] for e in state["enabled"]] == [expected]
    assert state["enabled"] == []
    assert len(state["history"]) == 3

    state = _post(login_server, "/reset", {})
    assert state["history"] == []
    assert [e["label"] for e in state["enabled"]] == ["enterName(UID)"]


def test_fire_bad_choice_is_400(login_server):
    req = urllib.request.Request(
        login_server + "/fire", data=b'{"index": 9}',
        headers={"Content-Type": "application/json"})
    with pytest.raises(urllib.error.HTTPError) as exc:
        urllib.request.urlopen(req)
    assert exc.value.code == 400
    assert json.loads(exc.value.read()) == {"error": "bad-choice"}


def test_sessions_are_isolated(login_server):
    _post(login_server, "/fire?session=a", {"index": 0})
    state_b = _get(login_server, "/state?session=b")
    assert state_b["history"] == []
    state_a = _get(login_server, "/state?session=a")
    assert len(state_a["history"]) == 1


def test_tree_endpoint(login_server):
    tree = _get(login_server, "/tree?maxDepth=20")
    assert not tree["truncated"]
    v = tree["root"]
    labels = []
    while v["children"]:
        assert len(v["children"]) == 1
        v = v["children"][0]
        labels.append(v["label"])
    assert labels == ["enterName(UID)", "enterPassword(PSWD)",
                      "login(UID, PSWD)"]
    assert v["leaf"] == "dead"


def test_tests_endpoint(login_server):
    assert _get(login_server, "/tests")["text"] == (
        "Model-Level Tests\n"
        "1. enterName(UID), enterPassword(PSWD), login(UID, PSWD)\n")
    all_text = _get(login_server, "/tests?all=1")["text"]
    assert len(all_text.splitlines()) == 4


def test_unknown_path_is_404(login_server):
    with pytest.raises(urllib.error.HTTPError) as exc:
        urllib.request.urlopen(login_server + "/nope")
    assert exc.value.code == 404
