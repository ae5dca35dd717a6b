import unittest
from pathlib import Path

import mock

from fflab.config import Settings, get_settings, override_settings
from fflab.errors import ConfigurationError


class TestSettings(unittest.TestCase):
    """Tests environment overrides and scoped changes"""

    def test_defaults(self):
        settings = Settings.from_env({})
        self.assertEqual(settings, Settings())
        self.assertEqual(settings.slack, 2.0)

    def test_environment(self):
        environ = {"FFLAB_GUARD": "1000", "FFLAB_BASELINE_DIR": "/tmp/b", "FFLAB_LOG_LEVEL": "debug"}
        settings = Settings.from_env(environ)
        self.assertEqual(settings.guard, 1000)
        self.assertEqual(settings.baseline_dir, Path("/tmp/b"))
        self.assertEqual(settings.log_level, "DEBUG")

    def test_malformed(self):
        self.assertRaises(ConfigurationError, Settings.from_env, {"FFLAB_GUARD": "many"})
        self.assertRaises(ConfigurationError, Settings.from_env, {"FFLAB_SLACK": "0.5"})
        self.assertRaises(ConfigurationError, Settings.from_env, {"FFLAB_TOLERANCE": "2"})
        self.assertRaises(ConfigurationError, Settings.from_env, {"FFLAB_LOG_LEVEL": "chatty"})

    def test_override_restores(self):
        before = get_settings()
        with override_settings(guard=10) as settings:
            self.assertEqual(settings.guard, 10)
            self.assertIs(get_settings(), settings)
        self.assertIs(get_settings(), before)

    def test_override_validates(self):
        with self.assertRaises(ConfigurationError):
            with override_settings(guard=0):
                pass

    @mock.patch.dict("os.environ", {"FFLAB_SLACK": "3"})
    def test_reads_os_environ(self):
        self.assertEqual(Settings.from_env().slack, 3.0)
