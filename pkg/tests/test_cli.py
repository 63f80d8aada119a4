"""
End-to-end tests of the gshift command line, the in-process API and the
configuration layers.
"""

import io
import os
import tempfile
import unittest
from contextlib import redirect_stderr
from unittest import mock

from GShift import classify_presentation
from GShift.config import AnalysisConfig, budget_scale, resolve_config
from GShift.core.intervals import Interval
from GShift.errors import PresentationError
from GShift.main.api import orbit_of
from GShift.main.cli import EXIT_DECISIVE, EXIT_ERROR, EXIT_UNKNOWN, run
from GShift.report.report_writer import ReportWriter

CORPUS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "corpus")
FAST = ["--budget-closure", "50"]


def corpus(name):
    return os.path.join(CORPUS, f"{name}.gsh")


def gshift(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stderr(err):
        code = run(list(argv), stdout=out)
    return code, out.getvalue(), err.getvalue()


def records(*argv):
    code, out, _ = gshift(*argv, "--format", "machine")
    return code, ReportWriter.parse_lines(out)


def of_kind(recs, kind):
    return [r for r in recs if r["kind"] == kind]


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------

class TestClassifyCommand(unittest.TestCase):

    def test_corpus_diagrams(self):
        expected = {
            "absolute_value": "equicontinuous, not distal",
            "negation": "distal",
            "square": "sensitive, not expansive",
            "outward_step": "expansive",
            "identity": "distal",
        }
        for name, diagram in expected.items():
            with self.subTest(name=name):
                code, recs = records("classify", corpus(name), *FAST)
                self.assertEqual(code, EXIT_DECISIVE)
                self.assertEqual([r["kind"] for r in recs], ["header"] + ["verdict"] * 4 + ["summary"])
                self.assertEqual(of_kind(recs, "summary")[0]["diagram"], diagram)

    def test_verdict_records(self):
        _, recs = records("classify", corpus("square"), *FAST)
        verdicts = {r["property"]: r for r in of_kind(recs, "verdict")}
        self.assertEqual(verdicts["equicontinuous"]["outcome"], "no")
        self.assertEqual(verdicts["sensitive"]["outcome"], "yes")
        self.assertEqual(verdicts["equicontinuous"]["evidence"]["type"], "escape")
        self.assertEqual(verdicts["expansive"]["evidence"]["type"], "image_gap")
        self.assertEqual(verdicts["expansive"]["evidence"]["samples"], [2, 3, 5])

    def test_machine_output_is_deterministic(self):
        first = gshift("classify", corpus("outward_step"), "--format", "machine", *FAST)
        second = gshift("classify", corpus("outward_step"), "--format", "machine", *FAST)
        self.assertEqual(first[1], second[1])

    def test_header_carries_effective_params(self):
        _, recs = records("classify", corpus("negation"), "--max-h", "3", "--probes=-2..2")
        header = recs[0]
        self.assertEqual((header["tool"], header["command"]), ("gshift", "classify"))
        self.assertEqual(header["params"]["max_h"], 3)
        self.assertEqual(header["params"]["probes"], Interval(-2, 2).to_record())

    def test_negative_values_without_equals_sign(self):
        _, recs = records("classify", corpus("negation"), "--probes", "-2..2", "--window", "-4..4")
        params = recs[0]["params"]
        self.assertEqual(params["probes"], Interval(-2, 2).to_record())
        self.assertEqual(params["window"], Interval(-4, 4).to_record())

    def test_human_output(self):
        code, out, _ = gshift("classify", corpus("negation"))
        self.assertEqual(code, EXIT_DECISIVE)
        self.assertIn("equicontinuous", out)
        self.assertIn("diagram: distal", out)

    def test_verify_every_certificate(self):
        for name in ("absolute_value", "negation", "square", "outward_step"):
            with self.subTest(name=name):
                code, recs = records("classify", corpus(name), "--verify", *FAST)
                self.assertEqual(code, EXIT_DECISIVE)
                check = of_kind(recs, "verify")[0]
                self.assertEqual(check["failures"], [])
                # shared evidence is checked once
                self.assertEqual(check["checked"], 2)

    def test_undecided_exit_code(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "swing.gsh")
            with open(path, "w", encoding="utf-8") as f:
                f.write("map phi\n  piece n>=0: -n - 1\n  piece n<0: -n + 1\nparam budget_closure = 20\n")
            code, recs = records("classify", path)
        self.assertEqual(code, EXIT_UNKNOWN)
        self.assertEqual(of_kind(recs, "summary")[0]["diagram"], "undetermined")


# ---------------------------------------------------------------------------
# orbit and witness
# ---------------------------------------------------------------------------

class TestOrbitCommand(unittest.TestCase):

    def test_inverse_orbit(self):
        code, recs = records("orbit", corpus("negation"), "--w", "3", "--direction", "inverse")
        self.assertEqual(code, EXIT_DECISIVE)
        orbit = of_kind(recs, "orbit")[0]
        self.assertEqual(orbit["status"], "finite")
        self.assertEqual(orbit["points"], [[-3, 3, ["phi"]], [3, 3, []]])

    def test_infinite_orbit(self):
        code, recs = records("orbit", corpus("square"), "--w", "2", "--verify")
        self.assertEqual(code, EXIT_DECISIVE)
        orbit = of_kind(recs, "orbit")[0]
        self.assertEqual(orbit["status"], "infinite_certified")
        self.assertEqual(orbit["certificate"]["seed"], 2)
        self.assertEqual(of_kind(recs, "verify")[0]["failures"], [])

    def test_human_table(self):
        _, out, _ = gshift("orbit", corpus("absolute_value"), "--w", "-5")
        self.assertIn("forward orbit of -5: finite", out)


class TestWitnessCommand(unittest.TestCase):

    def test_sensitivity_with_protected_set(self):
        code, recs = records("witness", corpus("square"), "--kind", "sensitivity", "--v", "2",
                             "--protected", "2,4", "--verify")
        self.assertEqual(code, EXIT_DECISIVE)
        witness = of_kind(recs, "witness")[0]
        self.assertEqual((witness["type"], witness["flipped_coord"], witness["word"]),
                         ("sensitivity", 16, ["phi", "phi"]))
        self.assertEqual(of_kind(recs, "verify")[0]["failures"], [])

    def test_sensitivity_base_from_the_verdict(self):
        code, recs = records("witness", corpus("square"), "--kind", "sensitivity", *FAST)
        self.assertEqual(code, EXIT_DECISIVE)
        witness = of_kind(recs, "witness")[0]
        self.assertEqual((witness["v"], witness["flipped_coord"]), (-8, 64))

    def test_expansivity_from_a_flipped_coordinate(self):
        code, recs = records("witness", corpus("outward_step"), "--kind", "expansivity", "--diff-at", "5", *FAST)
        self.assertEqual(code, EXIT_DECISIVE)
        witness = of_kind(recs, "witness")[0]
        self.assertEqual(witness["H"], [-1, 0, 1])
        self.assertEqual((witness["h"], witness["w"], witness["word"]), (1, 5, ["phi"] * 4))

    def test_explicit_patterns(self):
        code, recs = records("witness", corpus("outward_step"), "--kind", "expansivity", "--H=-1,0,1",
                             "--x", "k=3 default=2", "--y", "k=3 default=2 -3:0")
        self.assertEqual(code, EXIT_DECISIVE)
        witness = of_kind(recs, "witness")[0]
        self.assertEqual((witness["h"], witness["w"]), (-1, -3))

    def test_certified_set_given_as_a_separate_argument(self):
        code, recs = records("witness", corpus("outward_step"), "--kind", "expansivity", "--H", "-1,0,1",
                             "--diff-at", "-3", *FAST)
        self.assertEqual(code, EXIT_DECISIVE)
        witness = of_kind(recs, "witness")[0]
        self.assertEqual(witness["H"], [-1, 0, 1])

    def test_no_witness_for_a_distal_system(self):
        code, out, err = gshift("witness", corpus("negation"), "--kind", "sensitivity")
        self.assertEqual(code, EXIT_ERROR)
        self.assertEqual(out, "")
        self.assertIn("not sensitive", err)

    def test_expansivity_needs_a_second_point(self):
        code, _, err = gshift("witness", corpus("outward_step"), "--kind", "expansivity", "--H", "0")
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn("--diff-at", err)


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------

class TestOracleCommand(unittest.TestCase):

    def test_small_sweeps_agree(self):
        code, recs = records("oracle", "--max-m", "2", "--random-count", "5", "--random-m", "3")
        self.assertEqual(code, EXIT_DECISIVE)
        sweeps = of_kind(recs, "sweep")
        self.assertEqual(len(sweeps), 2)
        self.assertTrue(all(s["disagreements"] == [] for s in sweeps))
        self.assertEqual(sweeps[1]["instances"], 5)
        self.assertEqual(recs[0]["source"], "")


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class TestErrors(unittest.TestCase):

    def test_missing_file(self):
        code, _, err = gshift("classify", os.path.join(CORPUS, "nowhere.gsh"))
        self.assertEqual(code, EXIT_ERROR)
        self.assertTrue(err.startswith("error:"))

    def test_syntax_error_names_the_line(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "broken.gsh")
            with open(path, "w", encoding="utf-8") as f:
                f.write("map phi\n  piece all: n/2\n")
            code, _, err = gshift("classify", path)
        self.assertEqual(code, EXIT_ERROR)
        self.assertIn("line 2", err)

    def test_bad_interval_flag(self):
        with redirect_stderr(io.StringIO()), self.assertRaises(SystemExit):
            run(["classify", corpus("negation"), "--probes", "0.."], stdout=io.StringIO())

    def test_bad_report_line(self):
        with self.assertRaises(ValueError):
            ReportWriter.parse_lines('{"kind": "header"}\nnot json\n')
        with self.assertRaises(ValueError):
            ReportWriter.parse_lines('{"kind": "gossip"}\n')


# ---------------------------------------------------------------------------
# Configuration layers and the in-process API
# ---------------------------------------------------------------------------

class TestConfig(unittest.TestCase):

    def test_precedence(self):
        config = resolve_config({"budget_orbit": "100", "max_h": "1"}, {"budget_orbit": 200, "max_h": None}, {})
        self.assertEqual((config.budget_orbit, config.max_h), (200, 1))

    def test_budget_scale(self):
        config = resolve_config({"budget_orbit": "100"}, {"budget_orbit": 200}, {"GSHIFT_BUDGET_SCALE": "2"})
        self.assertEqual(config.budget_orbit, 400)
        self.assertEqual(config.budget_closure, 2 * AnalysisConfig().budget_closure)
        self.assertEqual(budget_scale({}), 1.0)
        for bad in ("abc", "0", "-1"):
            with self.assertRaises(PresentationError):
                budget_scale({"GSHIFT_BUDGET_SCALE": bad})

    def test_unknown_param(self):
        with self.assertRaises(PresentationError):
            resolve_config({"verbosity": "3"}, environ={})

    def test_invalid_values(self):
        with self.assertRaises(PresentationError):
            AnalysisConfig(budget_orbit=0)
        with self.assertRaises(PresentationError):
            resolve_config({"window": "0.."}, environ={})

    def test_scale_reaches_the_cli(self):
        with mock.patch.dict(os.environ, {"GSHIFT_BUDGET_SCALE": "0.5"}):
            _, recs = records("classify", corpus("negation"))
        self.assertEqual(recs[0]["params"]["budget_closure"], AnalysisConfig().budget_closure // 2)


class TestApi(unittest.TestCase):

    def test_classify_presentation(self):
        result = classify_presentation("map phi\n  piece all: -n\n")
        self.assertEqual(result.diagram, "distal")

    def test_file_params_and_overrides(self):
        text = "map phi\n  piece n>=1: n+1\n  piece n==0: 0\n  piece n<=-1: n-1\nparam max_h = 0\n"
        self.assertTrue(classify_presentation(text, overrides={"budget_closure": 50}).verdicts["expansive"].is_unknown)
        result = classify_presentation(text, overrides={"budget_closure": 50, "max_h": 1})
        self.assertEqual(result.diagram, "expansive")

    def test_orbit_of(self):
        result = orbit_of("map phi\n  piece all: n^2\n", 1)
        self.assertTrue(result.is_finite)
        self.assertEqual(orbit_of("map phi\n  piece all: -n\n", 3, "inverse").points(), [-3, 3])


if __name__ == "__main__":
    unittest.main()
