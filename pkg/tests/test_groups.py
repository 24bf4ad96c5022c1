import pytest

from stabext.gfmat import ContractViolation
from stabext.groups import (
    FiniteGroup,
    Perm,
    coset_representatives,
    cyclic_group,
    heisenberg_center,
    heisenberg_group,
    quotient,
    subgroup,
    symmetric_group,
)


def test_cyclic_structure():
    g = cyclic_group(6)
    assert g.n == 6
    assert g.mult(2, 5) == g.mult(5, 2)
    assert g.inv(1) != 1
    for x in range(6):
        assert g.mult(x, g.inv(x)) == 0


def test_symmetric_group():
    s3 = symmetric_group(3)
    assert s3.n == 6
    assert any(s3.mult(a, b) != s3.mult(b, a)
               for a in range(6) for b in range(6))


def test_heisenberg():
    for p in (2, 3):
        h = heisenberg_group(p)
        assert h.n == p**3
        z = heisenberg_center(h)
        assert len(z.members) == p
        assert z.is_normal


def test_identity_is_zero():
    for g in (cyclic_group(5), symmetric_group(4), heisenberg_group(3)):
        for x in range(g.n):
            assert g.mult(0, x) == x and g.mult(x, 0) == x


def test_subgroup_closure_and_normality():
    z12 = cyclic_group(12)
    h = subgroup(z12, [4])
    assert sorted(h.members) == [0, 4, 8]
    assert h.is_normal
    s3 = symmetric_group(3)
    transposition = next(
        x for x in range(6) if s3.mult(x, x) == 0 and x != 0
    )
    t = subgroup(s3, [transposition])
    assert len(t.members) == 2 and not t.is_normal


def test_as_group_cached_and_consistent():
    z8 = cyclic_group(8)
    h = subgroup(z8, [2])
    k = h.as_group()
    assert k is h.as_group()
    assert k.n == 4
    # index i corresponds to members[i] in the parent
    for i in range(k.n):
        for j in range(k.n):
            assert h.members[k.mult(i, j)] == z8.mult(h.members[i], h.members[j])


def test_coset_representatives():
    z8 = cyclic_group(8)
    h = subgroup(z8, [4])
    reps = coset_representatives(z8, h)
    assert reps[0] == 0 and len(reps) == 4
    seen = set()
    for r in reps:
        seen.update(z8.mult(r, m) for m in h.members)
    assert seen == set(range(8))


def test_quotient():
    z8 = cyclic_group(8)
    h = subgroup(z8, [4])
    q = quotient(z8, h)
    assert q.quotient.n == 4
    for g1 in range(8):
        for g2 in range(8):
            assert q.project(z8.mult(g1, g2)) == q.quotient.mult(
                q.project(g1), q.project(g2)
            )
    for a in range(q.quotient.n):
        assert q.project(q.lift(a)) == a


def test_quotient_requires_normal():
    s3 = symmetric_group(3)
    transposition = next(
        x for x in range(6) if s3.mult(x, x) == 0 and x != 0
    )
    with pytest.raises(ContractViolation):
        quotient(s3, subgroup(s3, [transposition]))


def test_group_json_roundtrip():
    g = heisenberg_group(2)
    g2 = FiniteGroup.from_json(g.to_json())
    assert g2.n == g.n
    for a in range(g.n):
        for b in range(g.n):
            assert g.mult(a, b) == g2.mult(a, b)


def test_bad_generators_rejected():
    # not a permutation of the right domain
    with pytest.raises((ContractViolation, ValueError, IndexError)):
        FiniteGroup([Perm([0, 1]), Perm([0, 2, 1])], [1])
