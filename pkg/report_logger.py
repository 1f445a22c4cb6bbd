#!/usr/bin/env python3
"""
Report Logger
Keeps every verification report in a readable text log and a JSON list
"""

import json
import os
from typing import Dict, List, Optional

import sailconfig


class ReportLogger:
    def __init__(self, log_file: Optional[str] = None):
        self.log_file = log_file or str(sailconfig.LOG_DIR / "sailkit_reports.log")
        base, _ = os.path.splitext(self.log_file)
        self.json_log_file = base + ".json"

    def status_of(self, report: Dict) -> str:
        """PASS / FAIL for verification reports, OK for plain computations"""
        if "passed" not in report:
            return "OK"
        return "PASS" if report["passed"] else "FAIL"

    def log_report(self, command: str, report: Dict) -> Dict:
        """Append a report with timestamp and status"""
        entry = {
            "timestamp": sailconfig.get_report_time_iso(),
            "time": sailconfig.get_report_time_str(),
            "command": command,
            "kind": report.get("kind", next((w for w in command.split() if not w.startswith("-")), "report")),
            "instance": report.get("instance", ""),
            "status": self.status_of(report),
            "failed_checks": [c["name"] for c in report.get("checks", []) if not c.get("passed", True)],
            "report": report,
        }
        self._write_text_log(entry)
        self._write_json_log(entry)
        return entry

    def _write_text_log(self, entry: Dict):
        with open(self.log_file, "a", encoding="utf-8") as f:
            f.write(f"\n{sailconfig.SEPARATOR}\n")
            f.write(f"TIMESTAMP: {entry['time']}\n")
            f.write(f"COMMAND:   {entry['command']}\n")
            f.write(f"INSTANCE:  {entry['instance']}\n")
            f.write(f"STATUS:    {entry['status']}\n")
            if entry["failed_checks"]:
                f.write(f"FAILED:    {', '.join(entry['failed_checks'])}\n")

    def _load(self) -> List[Dict]:
        if not os.path.exists(self.json_log_file):
            return []
        try:
            with open(self.json_log_file, "r", encoding="utf-8") as f:
                return json.load(f)
        except (json.JSONDecodeError, FileNotFoundError):
            return []

    def _write_json_log(self, entry: Dict):
        entries = self._load()
        entries.append(entry)
        with open(self.json_log_file, "w", encoding="utf-8") as f:
            json.dump(entries, f, indent=2, ensure_ascii=False)

    def get_stats(self) -> Dict:
        """Pass/fail counts per report kind"""
        entries = self._load()
        kinds: Dict[str, Dict[str, int]] = {}
        for entry in entries:
            counts = kinds.setdefault(entry["kind"], {})
            counts[entry["status"]] = counts.get(entry["status"], 0) + 1
        return {
            "total_reports": len(entries),
            "kinds": kinds,
            "recent": [
                {"time": e["time"], "command": e["command"], "status": e["status"]}
                for e in entries[-10:][::-1]
            ],
            "date_range": {
                "first": entries[0]["timestamp"] if entries else None,
                "last": entries[-1]["timestamp"] if entries else None,
            },
        }

    def search_reports(self, keyword: str, status: Optional[str] = None) -> List[Dict]:
        """Entries whose command or instance mentions keyword, optionally filtered by status"""
        keyword = keyword.lower()
        results = []
        for entry in self._load():
            haystack = f"{entry['command']} {entry['instance']}".lower()
            if keyword in haystack and (status is None or entry["status"] == status):
                results.append(entry)
        return results
