"""A configuration known only through its classes: four (1,1) curves on P1 x P1.

Geometry that cannot be read off equations (ampleness, intersections) comes
from declarations, so the best outcome is ``certified-with-assumptions``.

Run: python demos/declared_lattice.py
"""
from pathlib import Path

from quasihyp.certify import certify
from quasihyp.problem import load_problem

here = Path(__file__).resolve().parent.parent / "src" / "quasihyp" / "problems"
problem = load_problem(here / "p1p1_four_diagonals.json")
config = problem.config
print(f"digest {problem.digest}")
for theorem in ("2.1", "1.2", "2.2"):
    cert = certify(theorem, config, delta=2)
    assumed = [h.name for h in cert.hypotheses if h.status == "assumed"]
    print(f"{theorem}: {cert.verdict}")
    print(f"   chain {list(cert.rendered_chain)}")
    print(f"   taken on trust: {assumed}")
