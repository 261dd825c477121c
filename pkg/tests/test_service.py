"""HTTP service coverage: all endpoints, the three diagram JSON shapes,
and the error-code mapping (400 bad input, 413 resource guard, 409
case-analysis failure)."""

import pytest
from fastapi.testclient import TestClient

import khsuite
from khsuite.service import create_app

T26_BRAID = {"strands": 2, "word": [1, 1, 1, 1, 1, 1]}
TREFOIL_PD = [[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]]

T26_INTEGRAL = [
    {"i": 0, "j": 4, "free": 1, "torsion": []},
    {"i": 0, "j": 6, "free": 1, "torsion": []},
    {"i": 2, "j": 8, "free": 1, "torsion": []},
    {"i": 3, "j": 10, "free": 0, "torsion": [2]},
    {"i": 3, "j": 12, "free": 1, "torsion": []},
    {"i": 4, "j": 12, "free": 1, "torsion": []},
    {"i": 5, "j": 14, "free": 0, "torsion": [2]},
    {"i": 5, "j": 16, "free": 1, "torsion": []},
    {"i": 6, "j": 16, "free": 1, "torsion": []},
    {"i": 6, "j": 18, "free": 1, "torsion": []},
]


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(), raise_server_exceptions=False)


class TestHealth:
    def test_health(self, client):
        body = client.get("/health").json()
        assert body == {"status": "ok", "version": khsuite.__version__}


class TestCompute:
    def test_torus_link_integral_table(self, client):
        r = client.post("/compute", json={"diagram": T26_BRAID, "ring": "Z"})
        assert r.status_code == 200
        body = r.json()
        assert body["ring"] == "Z"
        assert body["reduced"] is False
        assert body["groups"] == T26_INTEGRAL
        assert body["total_free_rank"] == 8

    def test_bare_pd_array_shape(self, client):
        r = client.post("/compute", json={"diagram": TREFOIL_PD, "ring": "F2"})
        assert r.status_code == 200
        body = r.json()
        assert body["total_free_rank"] == 6
        assert all(cell["torsion"] == [] for cell in body["groups"])

    def test_pd_object_with_free_circles(self, client):
        r = client.post(
            "/compute", json={"diagram": {"pd": [], "free_circles": 2}}
        )
        assert r.status_code == 200
        assert r.json()["total_free_rank"] == 4

    def test_braid_axis_shape(self, client):
        spec = {"strands": 3, "word": [1, 2], "axis": True}
        r = client.post("/compute", json={"diagram": spec, "ring": "Q"})
        assert r.status_code == 200
        assert r.json()["total_free_rank"] == 8

    def test_reduced_with_basepoint(self, client):
        r = client.post(
            "/compute",
            json={
                "diagram": TREFOIL_PD,
                "ring": "F2",
                "reduced": True,
                "basepoint": 1,
            },
        )
        assert r.status_code == 200
        body = r.json()
        assert body["reduced"] is True
        assert body["total_free_rank"] == 3
        assert [(c["i"], c["j"]) for c in body["groups"]] == [
            (0, 3), (2, 7), (3, 9),
        ]

    def test_reduced_default_basepoint(self, client):
        r = client.post(
            "/compute", json={"diagram": TREFOIL_PD, "ring": "F2", "reduced": True}
        )
        assert r.status_code == 200
        assert r.json()["total_free_rank"] == 3

    def test_kernel_variant(self, client):
        quotient = client.post(
            "/compute",
            json={"diagram": TREFOIL_PD, "ring": "F2", "reduced": True,
                  "variant": "quotient"},
        ).json()
        kernel = client.post(
            "/compute",
            json={"diagram": TREFOIL_PD, "ring": "F2", "reduced": True,
                  "variant": "kernel"},
        ).json()
        assert quotient["total_free_rank"] == kernel["total_free_rank"]

    def test_workers_param_does_not_change_answer(self, client):
        one = client.post(
            "/compute", json={"diagram": T26_BRAID, "workers": 1}
        ).json()
        two = client.post(
            "/compute", json={"diagram": T26_BRAID, "workers": 2}
        ).json()
        assert one["groups"] == two["groups"]

    def test_basepoint_without_reduced_is_400(self, client):
        r = client.post(
            "/compute", json={"diagram": TREFOIL_PD, "basepoint": 1}
        )
        assert r.status_code == 400
        assert "reduced" in r.json()["detail"]

    def test_bad_ring_is_422(self, client):
        r = client.post("/compute", json={"diagram": TREFOIL_PD, "ring": "Z7"})
        assert r.status_code == 422

    def test_junk_diagram_is_400(self, client):
        r = client.post("/compute", json={"diagram": "not a diagram"})
        assert r.status_code == 400

    def test_malformed_pd_is_400(self, client):
        r = client.post("/compute", json={"diagram": [[1, 2, 3]]})
        assert r.status_code == 400

    def test_unknown_braid_key_is_400(self, client):
        spec = {"strands": 2, "word": [1, 1], "twist": 3}
        r = client.post("/compute", json={"diagram": spec})
        assert r.status_code == 400
        assert "twist" in r.json()["detail"]

    def test_crossing_guard_is_413(self, client):
        r = client.post(
            "/compute", json={"diagram": {"strands": 2, "word": [1] * 21}}
        )
        assert r.status_code == 413


class TestLee:
    def test_torus_link_survivors(self, client):
        body = client.post("/lee", json={"diagram": T26_BRAID}).json()
        assert body["ranks"] == [{"i": 0, "rank": 2}, {"i": 6, "rank": 2}]
        assert body["total"] == 4

    def test_negative_hopf(self, client):
        spec = {"strands": 2, "word": [-1, -1]}
        body = client.post("/lee", json={"diagram": spec}).json()
        assert body["ranks"] == [{"i": -2, "rank": 2}, {"i": 0, "rank": 2}]

    def test_guard_is_413(self, client):
        r = client.post("/lee", json={"diagram": {"strands": 2, "word": [1] * 21}})
        assert r.status_code == 413


class TestJones:
    def test_trefoil_text(self, client):
        body = client.post("/jones", json={"diagram": TREFOIL_PD}).json()
        assert body["text"] == "q + q^3 + q^5 - q^9"

    def test_trefoil_terms(self, client):
        body = client.post("/jones", json={"diagram": TREFOIL_PD}).json()
        terms = {t["power"]: t["coefficient"] for t in body["terms"]}
        assert terms == {1: 1, 3: 1, 5: 1, 9: -1}

    def test_unknot(self, client):
        spec = {"pd": [], "free_circles": 1}
        body = client.post("/jones", json={"diagram": spec}).json()
        assert body["text"] == "q^-1 + q"


class TestDetect:
    def test_target_presentation_passes(self, client):
        r = client.post("/detect", json={"diagram": T26_BRAID})
        assert r.status_code == 200
        body = r.json()
        assert body["overall"] == "pass"
        assert len(body["rules"]) == 8
        assert all(rule["verdict"] == "pass" for rule in body["rules"])
        assert "certificate" in body["summary"]["conclusion"]

    def test_mismatch_is_http_200_with_fail_verdict(self, client):
        spec = {"strands": 2, "word": [1, 1]}
        r = client.post("/detect", json={"diagram": spec})
        assert r.status_code == 200
        body = r.json()
        assert body["overall"] == "fail"
        assert body["summary"]["first_distinguishing_cell"] == [0, 2]
        verdicts = [rule["verdict"] for rule in body["rules"]]
        assert verdicts.count("not-applicable") == 7

    def test_junk_diagram_is_400(self, client):
        r = client.post("/detect", json={"diagram": 17})
        assert r.status_code == 400


class TestCensus:
    def test_bundled_census(self, client):
        r = client.post("/census", json={})
        assert r.status_code == 200
        rows = r.json()["rows"]
        assert len(rows) == 15
        passes = [row["name"] for row in rows if row["verdict"] == "pass"]
        assert passes == ["t2_6"]

    def test_inline_csv(self, client):
        csv_text = (
            "name,pd,free_circles\n"
            'tiny,"[[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]]",0\n'
        )
        r = client.post("/census", json={"csv_text": csv_text})
        assert r.status_code == 200
        rows = r.json()["rows"]
        assert len(rows) == 1
        assert rows[0]["name"] == "tiny"
        assert rows[0]["verdict"] == "fail"
        assert rows[0]["total_free_rank"] == 4

    def test_header_only_csv(self, client):
        r = client.post("/census", json={"csv_text": "name,pd,free_circles\n"})
        assert r.status_code == 200
        assert r.json()["rows"] == []

    def test_missing_pd_column_is_400(self, client):
        r = client.post("/census", json={"csv_text": "a,b\n1,2\n"})
        assert r.status_code == 400


class TestHflCases:
    def test_single_case(self, client):
        r = client.get("/hfl/cases", params={"case": "3/2"})
        assert r.status_code == 200
        body = r.json()
        assert body["contract"] == "strict"
        report = body["reports"][0]
        assert (report["case"], report["enumerated"], report["admissible"],
                report["braided"]) == ("3/2", 32, 2, 2)

    def test_all_cases(self, client):
        body = client.get("/hfl/cases").json()
        assert [r["case"] for r in body["reports"]] == [
            "x>5/2", "5/2", "3/2", "1/2", "-1/2", "-3/2", "x<-3/2",
        ]
        assert sum(r["admissible"] for r in body["reports"]) == 9

    def test_open_region_samples(self, client):
        r = client.get("/hfl/cases", params={"case": "x<-3/2", "samples": 3})
        assert r.status_code == 200
        report = r.json()["reports"][0]
        assert (report["enumerated"], report["admissible"]) == (8, 0)

    def test_samples_ignored_for_pinned_case(self, client):
        r = client.get("/hfl/cases", params={"case": "1/2", "samples": 2})
        assert r.status_code == 200
        assert r.json()["reports"][0]["admissible"] == 1

    def test_lax_contract_where_it_holds(self, client):
        r = client.get("/hfl/cases", params={"case": "5/2", "contract": "lax"})
        assert r.status_code == 200
        assert r.json()["reports"][0]["admissible"] == 6

    def test_lax_contract_conflict_is_409(self, client):
        r = client.get("/hfl/cases", params={"case": "1/2", "contract": "lax"})
        assert r.status_code == 409
        assert "non-braided" in r.json()["detail"]

    def test_unknown_case_is_400(self, client):
        r = client.get("/hfl/cases", params={"case": "9/2"})
        assert r.status_code == 400
        assert "valid" in r.json()["detail"]

    def test_unknown_contract_is_400(self, client):
        r = client.get("/hfl/cases", params={"contract": "loose"})
        assert r.status_code == 400

    def test_samples_out_of_range_is_422(self, client):
        r = client.get("/hfl/cases", params={"case": "x>5/2", "samples": 0})
        assert r.status_code == 422
