"""
From the command line
=====================

The same workflow through the ``levelseg`` command: make an image, segment
it, replay the run from its manifest, then benchmark a small corpus. Each
call below is equivalent to running ``levelseg <args>`` in a shell.
"""

import json
import os

from levelseg.cli import main

OUT = os.path.join(os.getcwd(), "demo_output", "cli")
os.makedirs(OUT, exist_ok=True)


def run(*args):
    print("$ levelseg", " ".join(args))
    code = main(list(args))
    print("exit", code)
    return code


disk = os.path.join(OUT, "disk.pgm")
run("synth", "--kind", "disk", "--size", "96x96", "--noise", "0.05", "--seed", "3",
    "--out", disk, "--truth", os.path.join(OUT, "disk.truth.pgm"))

###############################################################################
# Two ``--init`` shapes start the contour as their union.

prefix = os.path.join(OUT, "run1")
run("segment", "--algo", "rsf", "--input", disk, "--init", "circle:30,30,14",
    "--init", "circle:66,66,14", "--out-prefix", prefix)
with open(prefix + ".manifest.json") as fh:
    manifest = json.load(fh)
print({k: manifest[k] for k in ("iterations_run", "converged", "contours_after_filter", "seed")})

###############################################################################
# Replaying the manifest reproduces the final field bit for bit.

run("segment", "--manifest", prefix + ".manifest.json", "--out-prefix", os.path.join(OUT, "replay"))
with open(os.path.join(OUT, "replay.manifest.json")) as fh:
    print("same field:", json.load(fh)["phi_final_sha256"] == manifest["phi_final_sha256"])

###############################################################################
# Bad flags exit with 2, missing inputs with 3.

run("segment", "--algo", "chanvese", "--input", disk, "--out-prefix", prefix, "--alpha", "1")
run("segment", "--algo", "chanvese", "--input", os.path.join(OUT, "nope.pgm"), "--out-prefix", prefix)

###############################################################################
# Write the bundled corpus and benchmark two models on it.

corpus = os.path.join(OUT, "corpus")
run("bench", "--corpus", corpus, "--make-default-corpus")
report = os.path.join(OUT, "bench.csv")
run("bench", "--corpus", corpus, "--algos", "chanvese,rsf", "--report", report)
with open(report) as fh:
    print(fh.read())
