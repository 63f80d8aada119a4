# Collects report records and renders them as JSON lines or as tables
import json
import logging

import pandas as pd

from .. import __version__
from ..core.verdict import evidence_record
from ..core.words import Word

logger = logging.getLogger(__name__)

KINDS = ("header", "verdict", "orbit", "witness", "sweep", "verify", "summary")


class ReportWriter:
    """
    Accumulates the records of one CLI run.

    Machine output is one JSON object per line with sorted keys and no
    timestamps, so identical runs give identical bytes. Human output renders
    the same records as pandas tables.
    """

    def __init__(self, command, source="", params=None):
        """
        Args:
            command: Name of the command being reported
            source: Path of the presentation file (empty for the oracle)
            params: Effective analysis parameters
        """
        self.records = []
        self.add("header", tool="gshift", version=__version__, command=command, source=source,
                 params=params or {})

    def add(self, kind, **fields):
        if kind not in KINDS:
            raise ValueError(f"unknown record kind {kind!r}")
        record = {"kind": kind, **fields}
        self.records.append(record)
        return record

    def verdict(self, prop, verdict):
        record = verdict.to_record()
        return self.add("verdict", property=prop, outcome=record["outcome"], evidence=record["evidence"],
                        budgets_used=record["budgets_used"], reason=record["reason"])

    def orbit(self, base, result):
        record = result.to_record()
        return self.add("orbit", base=base, direction=record["direction"], status=record["status"],
                        points=record["points"], certificate=record["certificate"],
                        budget_used=record["budget_used"], reason=record["reason"])

    def witness(self, witness):
        return self.add("witness", **evidence_record(witness))

    def sweep(self, report):
        return self.add("sweep", **report.to_record())

    def verify(self, checked, failures):
        return self.add("verify", checked=checked, failures=list(failures))

    def summary(self, diagram, exit_code):
        return self.add("summary", diagram=diagram, exit_code=exit_code)

    # -- rendering ----------------------------------------------------------

    def render(self, fmt="human"):
        if fmt == "machine":
            return self.render_machine()
        if fmt == "human":
            return self.render_human()
        raise ValueError(f"unknown format {fmt!r}")

    def render_machine(self):
        return "\n".join(json.dumps(record, sort_keys=True) for record in self.records) + "\n"

    def render_human(self):
        sections = []
        header = self.records[0]
        sections.append(f"gshift {header['version']} {header['command']} {header['source']}".rstrip())

        verdicts = [r for r in self.records if r["kind"] == "verdict"]
        if verdicts:
            frame = pd.DataFrame(
                [{"property": r["property"], "outcome": r["outcome"],
                  "evidence": r["evidence"].get("type", "") if isinstance(r["evidence"], dict) else "",
                  "reason": r["reason"]} for r in verdicts]
            )
            sections.append(frame.to_string(index=False))

        for r in self.records:
            if r["kind"] == "orbit":
                sections.append(self._orbit_table(r))
            elif r["kind"] == "witness":
                frame = pd.DataFrame([{"field": key, "value": json.dumps(value)}
                                      for key, value in sorted(r.items()) if key != "kind"])
                sections.append(f"witness ({r.get('type', '')})\n{frame.to_string(index=False)}")
            elif r["kind"] == "sweep":
                sections.append(
                    pd.DataFrame([{"sweep": r["name"], "instances": r["instances"], "checks": r["checks"],
                                   "disagreements": len(r["disagreements"])}]).to_string(index=False)
                )
            elif r["kind"] == "verify":
                status = "ok" if not r["failures"] else "FAILED: " + "; ".join(r["failures"])
                sections.append(f"verified {r['checked']} item(s): {status}")
            elif r["kind"] == "summary":
                sections.append(f"diagram: {r['diagram']}\nexit code: {r['exit_code']}")
        return "\n\n".join(sections) + "\n"

    @staticmethod
    def _orbit_table(record):
        title = f"{record['direction']} orbit of {record['base']}: {record['status']}"
        if record["reason"]:
            title += f" ({record['reason']})"
        rows = [{"point": t, "origin": origin, "word": str(Word(tuple(letters)))}
                for t, origin, letters in record["points"]]
        table = pd.DataFrame(rows, columns=["point", "origin", "word"]).to_string(index=False)
        if record["certificate"] is not None:
            table += "\ncertificate: " + json.dumps(record["certificate"], sort_keys=True)
        return f"{title}\n{table}"

    # -- reading ------------------------------------------------------------

    @staticmethod
    def parse_lines(text):
        """Read machine output back into records."""
        records = []
        for number, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise ValueError(f"line {number}: not a JSON record ({e})") from e
            if record.get("kind") not in KINDS:
                raise ValueError(f"line {number}: unknown record kind {record.get('kind')!r}")
            records.append(record)
        return records
