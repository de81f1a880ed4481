"""Smoke test for the permhide Python module."""
import json

import permhide as ph

m = 8
sigma = ph.Permutation.random(m, seed=3)
assert (sigma * sigma.inverse()).is_identity()
assert sigma(1) == sigma.images()[0]
assert ph.Permutation.parse("cross", m).images() == [5, 6, 7, 8, 1, 2, 3, 4]

for p in (1, 2):
    g = ph.generate(sigma, b=2, k=2, p=p, seed=42)
    assert g.extract(m) == sigma
    assert g.num_vertices() == ph.vertex_count(m, b=2, k=2, p=p)
    assert ph.Graph.from_json(g.to_json()).extract(m) == sigma

eq = ph.generate(ph.Permutation.parse("id", m), seed=1)
cross = ph.generate(ph.Permutation.parse("cross", m), seed=1)
size, n = eq.max_matching(m)
assert size == n + m // 2
size, n = cross.max_matching(m)
assert size == n

text = eq.matching_stream_text(m)
assert text.startswith("PHSTREAM v1\n")
opt = ph.max_matching_size(text)
greedy = ph.greedy_matching(text)
assert 2 * len(greedy) >= opt

rho = ph.Permutation([2, 1, 3, 4, 6, 5, 8, 7])
assert rho.is_simple(2)
assert ph.generate_simple(rho, seed=5).extract(m) == rho

uniform = [1 / 6] * 6
point = [1.0] + [0.0] * 5
assert abs(ph.tvd(3, uniform, point) - 5 / 6) < 1e-12
assert abs(ph.kl(3, point, uniform) - __import__("math").log(6)) < 1e-12
assert max(abs(a - b) for a, b in zip(ph.convolve(3, point, uniform), uniform)) < 1e-12

prov = json.loads(eq.provenance_json())
assert len(prov) == eq.num_edges()
print("python smoke test ok", ph.__version__)
