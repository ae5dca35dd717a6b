import unittest
from fractions import Fraction

from jinja2 import UndefinedError

from fflab.harness.renderer import Renderer, RendererFactory, ReportFormat, TemplateEngineFactory
from fflab.harness.template_engines import Formatter, Jinja2
from fflab.harness.template_engines.jinja2 import fraction


class TestFormatter(unittest.TestCase):
    def test_format(self):
        formatter = Formatter()
        document = "scenario {id}, status {status}"
        self.assertEqual(formatter.template(document, {"id": "FT-1"}), "scenario FT-1, status {status}")

    def test_attr(self):
        report = type("Report", (), {"parameters": type("Parameters", (), {"prime": 5})})()
        formatter = Formatter()
        document = "p={r.parameters.prime}, d={d}"
        self.assertEqual(formatter.template(document, {"r": report}), "p=5, d={d}")

    def test_missing_attr(self):
        formatter = Formatter()
        document = "p={r.parameters.prime}, d={d}"
        self.assertEqual(formatter.template(document, {}), "p={r.parameters.prime}, d={d}")

    def test_index(self):
        formatter = Formatter()
        document = "first {rows[0]}, then {t}"
        self.assertEqual(formatter.template(document, {}), "first {rows[0]}, then {t}")

    def test_format_spec(self):
        self.assertEqual(Formatter().template("{id:<6}|{kind:>4}", {"id": "EN-1"}), "EN-1  |{kind:>4}")

    def test_fraction_and_grid(self):
        document = "gamma {gamma}, dims {dims}, slack {slack:.1f}"
        keywords = {"gamma": Fraction(47, 31), "dims": (3, 5), "slack": 2}
        self.assertEqual(Formatter().template(document, keywords), "gamma 47/31, dims 3,5, slack 2.0")


class TestJinja2(unittest.TestCase):
    def test_fraction_filter(self):
        self.assertEqual(fraction(Fraction(18, 5)), "18/5")
        self.assertEqual(fraction(Fraction(4)), "4")
        self.assertEqual(fraction(None), "-")
        self.assertEqual(fraction(2 ** 0.5), "1.41421")

    def test_render(self):
        engine = Jinja2()
        document = "{% for x in xs %}{{ x | fraction }};{% endfor %}"
        self.assertEqual(engine.template(document, {"xs": [Fraction(1, 2), 3.0]}), "1/2;3;")

    def test_strict_undefined(self):
        self.assertRaises(UndefinedError, Jinja2().template, "{{ missing }}", {})


class TestRendererFactory(unittest.TestCase):
    def test_engine_by_extension(self):
        self.assertIsInstance(TemplateEngineFactory.get_engine("table.md.j2"), Jinja2)
        self.assertIsInstance(TemplateEngineFactory.get_engine("listing.fmt"), Formatter)
        self.assertRaises(ValueError, TemplateEngineFactory.get_engine, "table.xml")

    def test_listing(self):
        renderer = RendererFactory.listing()
        line = renderer.render({"id": "FT-1", "kind": "exact", "dims": (2, 3), "anchor": "transform"})
        self.assertTrue(line.startswith("FT-1     exact"))
        self.assertIn(" 2,3 ", line)
        self.assertEqual(renderer.filename, "listing.fmt")

    def test_summary(self):
        row = {
            "scenario": "FT-1",
            "prime": 3,
            "dim": 2,
            "trials": 1,
            "seed": 0,
            "status": "PASS",
            "metric": 0.0,
            "runtime_ms": "",
        }
        lines = RendererFactory.summary().render({"rows": [row]}).splitlines()
        self.assertEqual(lines[0], "scenario,prime,dim,trials,seed,status,metric,runtime_ms")
        self.assertEqual(lines[1], "FT-1,3,2,1,0,PASS,0.0,")

    def test_table_formats(self):
        self.assertEqual(RendererFactory.table(ReportFormat.TEXT).filename, "table.txt.j2")
        self.assertRaises(ValueError, RendererFactory.table, ReportFormat.CSV)

    def test_report_format(self):
        self.assertIs(ReportFormat.from_str(" Markdown"), ReportFormat.MARKDOWN)
        self.assertIsNone(ReportFormat.from_str("html"))

    def test_missing_template(self):
        self.assertRaises(OSError, Renderer, "absent.j2")
