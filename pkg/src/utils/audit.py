"""
Audit logging for command runs.
Writes one JSONL record per command and keeps a monthly manifest of counts.
"""
import os
import json
import logging
from datetime import datetime
from typing import Any, Dict, Optional


class AuditLogger:
    """Appends command records under ``<results_dir>/<YYYY-MM>/``."""

    def __init__(self, results_dir: str = 'results'):
        self.results_dir = results_dir
        self.ensure_results_directory()

    def _month_dir(self) -> str:
        return os.path.join(self.results_dir, datetime.now().strftime('%Y-%m'))

    def ensure_results_directory(self):
        """Ensure the results directory and the current month directory exist."""
        os.makedirs(self._month_dir(), exist_ok=True)

    def write_command_audit(self,
                            command: str,
                            arguments: Dict[str, Any],
                            exit_code: int,
                            timing_ms: int,
                            residuals: Optional[Dict[str, float]] = None,
                            error: Optional[Dict[str, Any]] = None) -> str:
        """
        Append one record to the month's ``audit.jsonl``.

        Returns:
            Path to the audit file
        """
        self.ensure_results_directory()
        audit_file = os.path.join(self._month_dir(), 'audit.jsonl')

        audit_entry = {
            "command": command,
            "timestamp": datetime.now().isoformat(),
            "arguments": arguments,
            "exit_code": exit_code,
            "residuals": residuals or {},
            "timing_ms": timing_ms,
        }
        if error:
            audit_entry["error"] = error

        try:
            with open(audit_file, 'a', encoding='utf-8') as f:
                f.write(json.dumps(audit_entry, default=str) + '\n')
            logging.info(f"Audit entry written to {audit_file}")
            self.update_manifest(audit_entry)
            return audit_file
        except OSError as e:
            logging.error(f"Failed to write audit entry: {e}")
            raise

    def update_manifest(self, audit_entry: Dict[str, Any]):
        """Update the monthly manifest with per-command run and failure counts."""
        manifest_file = os.path.join(self._month_dir(), 'manifest.json')
        manifest = {
            "month": datetime.now().strftime('%Y-%m'),
            "commands": {},
            "totals": {"runs": 0, "failures": 0, "total_timing_ms": 0},
        }

        if os.path.exists(manifest_file):
            try:
                with open(manifest_file, 'r', encoding='utf-8') as f:
                    manifest.update(json.load(f))
            except (OSError, json.JSONDecodeError) as e:
                logging.warning(f"Failed to load existing manifest, creating new one: {e}")

        failed = audit_entry['exit_code'] != 0
        stats = manifest['commands'].setdefault(audit_entry['command'], {"runs": 0, "failures": 0})
        stats['runs'] += 1
        stats['failures'] += int(failed)
        manifest['totals']['runs'] += 1
        manifest['totals']['failures'] += int(failed)
        manifest['totals']['total_timing_ms'] += audit_entry['timing_ms']
        manifest['last_updated'] = audit_entry['timestamp']

        with open(manifest_file, 'w', encoding='utf-8') as f:
            json.dump(manifest, f, indent=2)
