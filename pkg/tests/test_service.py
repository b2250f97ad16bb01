from fastapi.testclient import TestClient

from stablered.reports import dump_document
from stablered.service import app
from stablered.tree import tree_to_document
from conftest import make_star
from stablered.tree import PRIMITIVE, WILD

client = TestClient(app)


def test_health():
    assert client.get("/health").json() == {"status": "ok"}


def test_analyze_dessin_endpoint():
    resp = client.post("/analyze-dessin", json={
        "p": 7, "types": ["2-3", "2-3", "7"], "n_prime": 2,
        "group_order": 5040})
    assert resp.status_code == 200
    body = resp.json()
    assert body["status"] == "ok"
    assert body["results"]["class_count"] == 9
    assert body["results"]["stable_field_degree"] == 6
    assert body["results"]["predicted_ramification_exponents"] == [3]
    sig = body["results"]["signature"]
    assert sig == [{"num": 1, "den": 2}, {"num": 1, "den": 2},
                   {"num": 0, "den": 1}]


def test_analyze_dessin_aut_variants():
    resp = client.post("/analyze-dessin", json={
        "p": 7, "types": ["6", "6", "2-2"], "n_prime": 3,
        "aut_orders": ["1", "1", "1|2"], "group_order": 5040})
    body = resp.json()
    assert body["results"]["class_count"] == 4
    assert body["results"]["predicted_ramification_exponents"] == [2, 4]


def test_verify_datum_endpoint():
    resp = client.post("/verify-datum",
                       json={"p": 7, "sigma": ["1/6", "1/6", "2/3"]})
    body = resp.json()
    assert body["status"] == "ok"
    assert body["results"]["classification"] == "Logarithmic"
    assert body["results"]["local_vcf"]["passed"] is True
    assert body["results"]["special"]["special"] is True
    assert body["results"]["curve_leading"] == 5


def test_enumerate_signatures_endpoint():
    resp = client.post("/enumerate-signatures",
                       json={"p": 3, "max_new_tails": 0})
    body = resp.json()
    assert body["results"]["count"] == 1
    assert body["results"]["signatures"][0]["entries"] == [
        {"num": 1, "den": 2}, {"num": 1, "den": 2}, {"num": 0, "den": 1}]


def test_tree_check_endpoint_pass_and_fail():
    good = make_star([(PRIMITIVE, 6, 1), (PRIMITIVE, 6, 1), (PRIMITIVE, 3, 2)])
    resp = client.post("/tree-check", json={"tree": tree_to_document(good)})
    body = resp.json()
    assert body["status"] == "ok"
    assert body["results"]["structure"]["kind"] == "Star"

    bad = make_star([(PRIMITIVE, 2, 1), (PRIMITIVE, 2, 1), (PRIMITIVE, 4, 1)])
    resp = client.post("/tree-check", json={"tree": tree_to_document(bad)})
    body = resp.json()
    assert body["status"] == "check-failed"
    assert body["results"]["validation"]["violations"]


def test_tree_check_malformed():
    resp = client.post("/tree-check", json={"tree": {"root": "v0"}})
    assert resp.status_code == 400


def test_tree_check_exceptional_degree():
    from stablered.tree import NEW
    exc2 = make_star([(NEW, 1, 2), (WILD, 1, 0), (WILD, 1, 0), (WILD, 1, 0)])
    resp = client.post("/tree-check",
                       json={"tree": tree_to_document(exc2), "p": 7})
    body = resp.json()
    assert body["results"]["structure"]["kind"] == "Exceptional2"
    assert body["results"]["exceptional_stable_degree"] == 12   # 2 * (7-1)


def test_tail_normalize_endpoint():
    resp = client.post("/tail-normalize", json={
        "p": 7, "m": 6, "a": 2, "coefficients": [1, 3, 5, 0]})
    body = resp.json()
    assert body["status"] == "ok"
    assert body["results"]["canonical"] is True
    assert body["results"]["replay_matches"] is True
    assert body["results"]["h"] == 8
    assert [c["kind"] for c in body["results"]["chain"]] == \
        ["shift", "yshift"]


def test_germ_reduce_endpoint():
    resp = client.post("/germ-reduce", json={
        "p": 7, "m": 3, "h": 4, "valuation_ratio": "7/8"})
    body = resp.json()
    assert body["results"]["verdict"]["outcome"] == "GoodReduction"
    resp2 = client.post("/germ-reduce", json={
        "p": 7, "m": 3, "h": 4, "valuation_ratio": "1/2"})
    assert resp2.json()["results"]["verdict"]["outcome"] == "BadReduction"


def test_reports_are_byte_identical():
    payload = {"p": 7, "types": ["2-3", "2-3", "7"], "n_prime": 2,
               "group_order": 5040}
    a = client.post("/analyze-dessin", json=payload).json()
    b = client.post("/analyze-dessin", json=payload).json()
    assert dump_document(a) == dump_document(b)


def test_no_floats_anywhere():
    payload = {"p": 7, "types": ["6", "6", "2-2"], "n_prime": 3,
               "group_order": 5040}
    body = client.post("/analyze-dessin", json=payload).json()

    def scan(node):
        assert not isinstance(node, float), node
        if isinstance(node, dict):
            for v in node.values():
                scan(v)
        elif isinstance(node, list):
            for v in node:
                scan(v)

    scan(body)
