"""Documents on disk: canonical JSON, raw curve counts, and the CLI.

All documents serialize to sorted-key JSON with exact rationals as
"num/den" strings, so re-emitting a parsed file is byte-identical and
reports are reproducible (no timestamps anywhere).

    python demos/05_file_formats.py
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

from sftdga import io as sio
from sftdga.corpus import toy_overtwisted

toy = toy_overtwisted()
workdir = Path(tempfile.mkdtemp(prefix="sftdga-demo-"))

# rational coefficients are the native mode; raw-counts mode stores the bare
# curve count instead, and ingestion restores coeff = sign * count / (C(I-) C(I+))
for raw in (False, True):
    data = sio.differential_to_data(toy.master, raw_counts=raw)
    path = workdir / ("toy-%s.json" % ("raw" if raw else "rational"))
    sio.save_document(str(path), data)
    again = sio.differential_from_data(sio.load_document(str(path)))
    assert again.images == toy.master.images
    print("%-60s %5d bytes, round-trips" % (path, path.stat().st_size))

rational = json.loads((workdir / "toy-rational.json").read_text())
raw = json.loads((workdir / "toy-raw.json").read_text())
print("\nthe q_c p_b term of d(q_a), both coefficient modes")
print("(kappa_b = 2, so the count is twice the coefficient):")
for label, doc in (("rational", rational), ("raw-counts", raw)):
    term, = [t for t in doc["images"]["q:a"] if t["p"]]
    print("  %-10s coeff=%-3s q=%s p=%s" % (label, term["coeff"],
                                            term["q"], term["p"]))

# the same machinery drives the command line tool
cli = [sys.executable, "-m", "sftdga.cli"]
subprocess.run(cli + ["corpus", "toy-overtwisted", "--dir", str(workdir)],
               check=True)
base = workdir / "toy-overtwisted"
print("\n$ sftdga validate %s-differential.json" % base.name, flush=True)
subprocess.run(cli + ["validate", "%s-differential.json" % base], check=True)

print("\n$ sftdga find-primitive ... --flavor CH --report report.json",
      flush=True)
subprocess.run(cli + ["find-primitive", "%s-differential.json" % base,
                      "--flavor", "CH", "--bounds", "%s-bounds.json" % base,
                      "--report", str(workdir / "report.json")], check=True)
report = sio.load_document(str(workdir / "report.json"))
print("report verdicts:", report["verdicts"])
print("inputs are recorded as digests:",
      sorted(k.rsplit("/", 1)[-1] for k in report["inputs"]))
