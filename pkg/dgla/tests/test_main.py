import contextlib
import io
import json
import logging
import os
import shutil
import tempfile
import unittest

from dgla import config
from dgla.errors import EXIT_INPUT, EXIT_OK, EXIT_TRUNCATION, EXIT_VERDICT
from dgla.main import main
from dgla.report import JobSpec, run

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture(name):
    return os.path.join(FIXTURES, name)


class TestMain(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        self.log = os.path.join(self.tmp, "dgla.log")

    def tearDown(self):
        for h in logging.getLogger().handlers[:]:
            h.close()
            logging.getLogger().removeHandler(h)
        shutil.rmtree(self.tmp)
        config.load_config(None)

    def dgla(self, *argv):
        """
        Run the CLI, returning (exit code, stdout, stderr).
        """
        out, err = io.StringIO(), io.StringIO()
        args = ["-C", self.tmp, "-c", "log.file", self.log, *argv]
        code = EXIT_OK
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            try:
                main(args)
            except SystemExit as exc:
                code = exc.code
        return code, out.getvalue(), err.getvalue()

    def report(self, *argv):
        code, out, err = self.dgla(*argv)
        self.assertEqual(code, EXIT_OK, err)
        return json.loads(out)

    def test_ce_homology(self):
        r = self.report("ce-homology", "--in", fixture("sl2.json"), "--max-weight", "3")
        assert r["flags"] == ["exact"]
        rows = {row["degree"]: row["homology"] for row in r["tables"]["homology"]}
        assert rows == {-3: 1, -2: 0, -1: 0, 0: 1}
        assert len(r["input_sha256"]) == 64
        assert r["job"]["max_weight"] == 3

    def test_json_is_deterministic(self):
        argv = ("unit-check", "--in", fixture("free_odd.json"), "--accept-truncated")
        a, b = self.report(*argv), self.report(*argv)
        a.pop("elapsed_seconds")
        b.pop("elapsed_seconds")
        assert a == b
        assert a["verdict"] == "PASS"

    def test_validate_kinds(self):
        r = self.report("validate", "--in", fixture("dual_numbers.json"))
        assert r["result"]["artinian"] is True
        assert r["result"]["nilpotency_order"] == 2
        r = self.report("validate", "--in", fixture("abelian2.json"))
        assert r["result"]["very_good"] is True

    def test_input_errors(self):
        # sl2_bad has [h,e] = 3e, which breaks Jacobi on (h,e,f)
        code, _, err = self.dgla("validate", "--in", fixture("sl2_bad.json"))
        assert code == EXIT_INPUT
        assert err.startswith("ERROR: [lie] jacobi violated at (h,e,f)")
        code, _, _ = self.dgla("validate", "--in", os.path.join(self.tmp, "missing.json"))
        assert code == EXIT_INPUT
        code, _, _ = self.dgla("ce-homology", "--in", fixture("sl2.json"), "--max-weight", "0")
        assert code == EXIT_INPUT
        code, _, _ = self.dgla("mc", "--in", fixture("sl2.json"))
        assert code == EXIT_INPUT

    def test_bad_config_path(self):
        code, _, err = self.dgla("-c", "defaults.colour", "red", "validate", "--in", fixture("sl2.json"))
        assert code == EXIT_INPUT
        assert "ERROR: Invalid config path" in err

    def test_truncation_exit(self):
        code, _, err = self.dgla("unit-check", "--in", fixture("sl2.json"))
        assert code == EXIT_INPUT, err
        # no weight grading, so C(L) is only known up to the truncation
        path = os.path.join(self.tmp, "unweighted.json")
        with open(path, "w") as f:
            json.dump({"kind": "lie", "generators": [{"label": "x", "degree": 1}]}, f)
        code, _, err = self.dgla("unit-check", "--in", path)
        assert code == EXIT_TRUNCATION
        assert "[moduli]" in err
        r = self.report("unit-check", "--in", path, "--accept-truncated")
        assert r["flags"] == ["weight-truncated(4)"]
        assert r["result"]["window"] == [1, 1]
        assert r["verdict"] == "PASS"
        job = JobSpec(command="ce-homology", input=fixture("sl2.json"), max_weight=2)
        assert run(job).flags == ["weight-truncated(2)"]

    def test_mc_and_schlessinger(self):
        r = self.report("mc", "--in", fixture("abelian2.json"), "--algebra", fixture("dual_numbers.json"))
        assert r["flags"] == ["affine-linear"]
        assert r["result"]["pi0_dimension"] == 1
        assert r["verdict"] == "PASS"
        r = self.report("mc-tangent", "--in", fixture("abelian2.json"), "--n", "1")
        assert (r["result"]["dimension"], r["result"]["expected"]) == (1, 1)
        r = self.report(
            "schlessinger", "--in", fixture("abelian2.json"), "--algebra", fixture("dual_numbers.json")
        )
        assert (r["result"]["lhs"], r["result"]["rhs"]) == (0, 0)
        assert r["verdict"] == "PASS"

    def test_verdict_exit(self):
        code, out, _ = self.dgla("-c", "tr.verdict_pass", "FAIL", "validate", "--in", fixture("sl2.json"))
        assert code == EXIT_VERDICT
        assert json.loads(out)["verdict"] == "FAIL"

    def test_cellular_resolve_outputs(self):
        path = os.path.join(self.tmp, "cells.csv")
        code, _, _ = self.dgla(
            "cellular-resolve", "--in", fixture("truncated_poly.json"), "--format", "csv", "--out", path
        )
        assert code == EXIT_OK
        with open(path) as f:
            lines = f.read().splitlines()
        assert lines[0].startswith("table,")
        assert any(line.startswith("cells,X0_0,X,0,0") for line in lines)
        code, out, _ = self.dgla("cellular-resolve", "--in", fixture("truncated_poly.json"), "--format", "table")
        assert code == EXIT_OK
        assert "U1_0" in out
        assert "cellular-resolve: PASS" in out

    def test_free_lie_and_pbw(self):
        r = self.report("free-lie", "--in", fixture("free_odd.json"))
        assert r["result"]["basis"] == {"1": ["x"], "2": ["[x,x]"], "3": [], "4": []}
        r = self.report("pbw-check", "--in", fixture("free_odd.json"))
        assert r["result"]["bijective"] is True

    def test_config_commands(self):
        code, out, _ = self.dgla("default-config")
        assert code == EXIT_OK
        assert "[defaults]" in out
        code, out, _ = self.dgla("-c", "defaults.depth", "5", "config")
        assert "depth = 5" in out

    def test_missing_config_dir(self):
        code, _, err = self.dgla("-C", os.path.join(self.tmp, "nope"), "config")
        assert code == EXIT_INPUT
        assert "does not exist" in err


if __name__ == "__main__":
    unittest.main()
