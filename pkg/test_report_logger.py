#!/usr/bin/env python3
"""
Test script for report_logger
"""
import unittest
import tempfile
import shutil
import os
import sys
from pathlib import Path

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import sailconfig
from report_logger import ReportLogger


class TestReportLogger(unittest.TestCase):
    def setUp(self):
        self.test_dir = tempfile.mkdtemp()
        self.original_log_dir = sailconfig.LOG_DIR
        sailconfig.LOG_DIR = Path(self.test_dir)
        self.logger = ReportLogger()

    def tearDown(self):
        sailconfig.LOG_DIR = self.original_log_dir
        shutil.rmtree(self.test_dir, ignore_errors=True)

    def test_default_paths_follow_log_dir(self):
        self.assertEqual(self.logger.log_file, str(Path(self.test_dir) / "sailkit_reports.log"))
        self.assertEqual(self.logger.json_log_file, str(Path(self.test_dir) / "sailkit_reports.json"))

    def test_status(self):
        self.assertEqual(self.logger.status_of({"passed": True}), "PASS")
        self.assertEqual(self.logger.status_of({"passed": False}), "FAIL")
        self.assertEqual(self.logger.status_of({"iota": 2}), "OK")

    def test_log_and_stats(self):
        failing = {
            "kind": "family",
            "instance": "family n=0 (p=3)",
            "passed": False,
            "checks": [{"name": "g_iota", "passed": False}, {"name": "0_discriminant", "passed": True}],
        }
        entry = self.logger.log_report("family --n 0 verify", failing)
        self.assertEqual(entry["failed_checks"], ["g_iota"])
        self.logger.log_report("shanks --a 1 verify", {"kind": "shanks", "instance": "shanks a=1", "passed": True})
        self.logger.log_report("quad --d 2 cf", {"cf": "[1; 2]"})

        stats = self.logger.get_stats()
        self.assertEqual(stats["total_reports"], 3)
        self.assertEqual(stats["kinds"]["family"], {"FAIL": 1})
        self.assertEqual(stats["kinds"]["quad"], {"OK": 1})
        self.assertEqual(stats["recent"][0]["command"], "quad --d 2 cf")

        with open(self.logger.log_file, encoding="utf-8") as f:
            text = f.read()
        self.assertIn("FAILED:    g_iota", text)
        self.assertEqual(text.count(sailconfig.SEPARATOR), 3)

    def test_search(self):
        self.logger.log_report("shanks --a 1 verify", {"kind": "shanks", "instance": "shanks a=1", "passed": True})
        self.logger.log_report("shanks --a 2 verify", {"kind": "shanks", "instance": "shanks a=2", "passed": False})
        self.assertEqual(len(self.logger.search_reports("SHANKS")), 2)
        self.assertEqual(len(self.logger.search_reports("shanks", status="FAIL")), 1)
        self.assertEqual(self.logger.search_reports("family"), [])

    def test_corrupt_json_is_ignored(self):
        Path(self.logger.json_log_file).write_text("{not json")
        self.assertEqual(self.logger.get_stats()["total_reports"], 0)


if __name__ == "__main__":
    unittest.main()
