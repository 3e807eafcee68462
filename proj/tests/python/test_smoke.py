import unittest

import ullpi


AXIOM = "system ull\nright x : 1\nprocess x<>\n"

CUT = (
    "system ull\n"
    "right z : 1\n"
    "process new x : 1 . (x<> | x().z<>)\n"
)


class CheckSmoke(unittest.TestCase):
    def test_accepts_axiom(self):
        rep = ullpi.check(AXIOM)
        self.assertTrue(rep["accepted"])
        self.assertIn("1R*", rep["derivation"])

    def test_rejects_wrong_type(self):
        rep = ullpi.check("system ull\nright x : bot\nprocess x<>\n")
        self.assertFalse(rep["accepted"])
        self.assertIn(rep["reason"], ("no rule applies", "context mismatch"))

    def test_parse_error_is_value_error(self):
        with self.assertRaises(ValueError):
            ullpi.check("system ull\nprocess x<")

    def test_star_fragment(self):
        rep = ullpi.check_star(AXIOM)
        self.assertTrue(rep["accepted"])
        self.assertEqual(rep["r_degree"], 1)


class SemanticsSmoke(unittest.TestCase):
    def test_reduce_is_deterministic(self):
        a = ullpi.reduce(CUT, fuel=8, seed=5)
        b = ullpi.reduce(CUT, fuel=8, seed=5)
        self.assertEqual(a, b)
        self.assertIn("z<>", a)

    def test_canonical_drops_inert_restriction(self):
        self.assertEqual(ullpi.canonical("new a . x<>"), "x<>")

    def test_dual(self):
        self.assertEqual(ullpi.dual("1 * bot"), "bot par 1")


class MetatheorySmoke(unittest.TestCase):
    def test_classify_with_hints(self):
        cll = "system cll\nright x : 1\nprocess x<>\n"
        ill = "system ill\nright x : 1\nprocess x<>\n"
        rep = ullpi.classify("x<>", hint_ull=AXIOM, hint_cll=cll, hint_ill=ill)
        self.assertEqual(
            rep, {"u": True, "c": True, "j": True, "u_star": True}
        )

    def test_translate_round(self):
        out = ullpi.translate(AXIOM, to="cll")
        self.assertTrue(out["validated"])
        back = ullpi.translate(out["file"], to="ull")
        self.assertTrue(back["validated"])

    def test_translate_wrong_source(self):
        with self.assertRaises(ValueError):
            ullpi.translate(AXIOM, to="ull")

    def test_expand_identity(self):
        proc = ullpi.expand_identity("1 * bot")
        self.assertIn("x(", proc)

    def test_locality_flags_received_subject(self):
        hits = ullpi.locality("x(y).*y(z).z().new s . x<s>.s<>")
        self.assertEqual(len(hits), 1)
        self.assertEqual(hits[0]["name"], "y")

    def test_subject_reduction_on_cut(self):
        rep = ullpi.subject_reduction(CUT, fuel=8, seed=0)
        self.assertTrue(rep["pass"])
        self.assertGreaterEqual(rep["reducts_checked"], 1)


class GeneratorSmoke(unittest.TestCase):
    def test_generated_judgments_check(self):
        for system in ("ull", "cll", "ill"):
            for text in ullpi.generate(system=system, count=8, seed=3):
                self.assertTrue(ullpi.check(text)["accepted"], text)

    def test_generation_is_deterministic(self):
        a = ullpi.generate(system="ull", count=4, seed=9)
        b = ullpi.generate(system="ull", count=4, seed=9)
        self.assertEqual(a, b)

    def test_star_only_corpus(self):
        for text in ullpi.generate(system="ull", count=6, seed=2, star_only=True):
            rep = ullpi.check_star(text)
            self.assertTrue(rep["accepted"], text)
            self.assertEqual(rep["r_degree"], 1)


if __name__ == "__main__":
    unittest.main()
