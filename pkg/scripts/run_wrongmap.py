"""Flags of the three-interval example and of its window-3 enlargement."""
import json
from importlib.resources import files

from corrhom.covers import acyclic_enlargement, is_acyclic_valued, sliding_box_cover
from corrhom.documents import load_map
from corrhom.induced import analyze, verify_homological_extension


def main():
    m = load_map(files("corrhom") / "data" / "wrongmap.json")
    r = analyze(m)
    g = acyclic_enlargement(m, sliding_box_cover(m.target_grid, 3))
    rg = analyze(g, r.domain_homology)
    ext = verify_homological_extension(m, g, r, rg)
    out = {
        "graph": r.graph_homology.describe(),
        "p1": r.p_star[1].tolist(),
        "q1": r.q_star[1].tolist(),
        "complete": r.complete,
        "consistent": r.consistent,
        "enlargement": {
            "values": {str(k): sorted(v) for k, v in sorted(g.values.items())},
            "acyclic": is_acyclic_valued(g, pointwise=True).acyclic,
            "p_star_iso": rg.p_star.is_isomorphism(),
            "respects_pairs": g.respects_pairs,
            "extension": ext.holds,
            "why": ext.failures,
        },
    }
    print(json.dumps(out, indent=1))


if __name__ == "__main__":
    main()
