"""Print the small worked examples: commonalities, weights, cautious fusion, ablation.

    python scripts/worked_examples.py
"""

from focalpoints import (
    Frame,
    MassFunction,
    cautious_fusion,
    commonality_to_conjunctive_weights,
    conjunctive_combine,
    mass_to_commonality,
)
from focalpoints.ablation import AblationSession


def show(title, frame, values):
    print(title)
    for point, value in values.items():
        print(f"  {frame.format(point):>10}  {value: .6f}")


def three_element():
    frame = Frame("abc")
    m = MassFunction.from_labels(frame, {"abc": 0.1, "ab": 0.1, "bc": 0.2, "a": 0.6})
    q = mass_to_commonality(m)
    show("commonality on the meet-closure of the support", frame, q.on_points())
    w = commonality_to_conjunctive_weights(q)
    show("conjunctive weights", frame, w.on_points())
    session = AblationSession(m, q, w)
    for labels in ("b", "ab"):
        signed, _ = session.ablate(frame.mask(labels), 1.0)
        show(f"mass after setting w({{{','.join(labels)}}}) to 1 (valid: {signed.is_valid_mass})", frame, dict(signed.inner.items()))


def two_sources():
    frame = Frame("abcd")
    m1 = MassFunction.from_labels(frame, {"ab": 0.2, "bc": 0.2, "a": 0.6})
    m2 = MassFunction.from_labels(frame, {"bc": 0.3, "cd": 0.1, "c": 0.6})
    r = cautious_fusion(m1, m2)
    print(f"cautious fusion over the shared core {frame.format(r.core)}")
    show("  weights of source 1", frame, r.w1.on_points())
    show("  weights of source 2", frame, r.w2.on_points())
    show("  fused weights", frame, r.w12.on_points())
    show("  fused commonality", frame, r.q12.on_points())
    show("  fused mass", frame, dict(r.mass.items()))
    show("  direct conjunctive combination", frame, dict(conjunctive_combine(m1, m2).items()))


if __name__ == "__main__":
    three_element()
    print()
    two_sources()
