import numpy as np
import pytest

from oracles import matrix_product_is_scaled_identity
from propus.corpus import ingest_paper_corpus
from propus.errors import DomainError, UnsupportedGroupError
from propus.hadamard import (
    PropusMatrix,
    assemble_propus,
    back_identity,
    circulant,
    export_matrix,
    family_to_matrix,
    import_matrix,
    is_hadamard,
)
from propus.params import ParameterSet
from propus.residue import block_to_sequence
from propus.verify import verify_family

CORPUS = ingest_paper_corpus()


def _fam(params, index=1):
    p = ParameterSet.parse(params)
    return next(e.family for e in CORPUS if e.params == p and e.index == index)


def test_back_identity():
    assert back_identity(1).tolist() == [[1]]
    assert back_identity(3).tolist() == [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
    r = back_identity(47)
    assert np.array_equal(r @ r, np.eye(47, dtype=np.int64))
    assert (r.sum(0) == 1).all() and (r.sum(1) == 1).all()
    with pytest.raises(DomainError):
        back_identity(0)


def test_circulant_orientation():
    c = circulant([1, 2, 3])
    assert c.tolist() == [[1, 2, 3], [3, 1, 2], [2, 3, 1]]


def test_trivial_order_4():
    one = np.array([[1]])
    m = assemble_propus(one, one, one, one)
    assert m.order == 4 and m.is_hadamard and m.is_symmetric
    assert matrix_product_is_scaled_identity(m.entries.tolist())


def test_order_mismatch():
    with pytest.raises(DomainError):
        assemble_propus(np.ones((3, 3)), np.ones((3, 3)), np.ones((3, 3)), np.ones((5, 5)))


def test_figure_order_188():
    f = _fam("(47;20,22,22,18;35)")
    m = family_to_matrix(f)
    assert m.order == 188 and m.is_hadamard and m.is_symmetric
    h = m.entries
    assert np.array_equal(h @ h.T, 188 * np.eye(188, dtype=np.int64))
    assert np.array_equal(h, h.T)


def test_unequal_middle_circulants_break_hadamard():
    f = _fam("(47;20,22,22,18;35)")
    a, b, d = (block_to_sequence(x).astype(np.int64) for x in (f.a, f.b, f.d))
    b2 = b.copy()
    b2[0] = -b2[0]
    m = assemble_propus(circulant(a), circulant(b), circulant(b2), circulant(d))
    assert not m.is_hadamard


def test_d_symmetric_family_is_swapped():
    f = _fam("(47;20,22,22,18;35)", 2)
    rep = verify_family(f)
    assert rep.d_symmetric and not rep.a_symmetric
    m = family_to_matrix(f)
    assert m.order == 188 and m.is_hadamard and m.is_symmetric
    forced = family_to_matrix(f, prefer="A")
    assert forced.is_hadamard and not forced.is_symmetric


def test_orbit_families_give_symmetric_matrices():
    for params, order in (("(73;36,36,36,28;63)", 292), ("(113;56,49,49,56;97)", 452)):
        m = family_to_matrix(_fam(params))
        assert m.order == order and m.is_hadamard and m.is_symmetric


def test_symmetric_c1_is_needed():
    """Breaking the symmetry of C1 breaks the symmetry of H."""
    f = _fam("(47;20,22,22,18;35)")
    a, b, d = (block_to_sequence(x).astype(np.int64) for x in (f.a, f.b, f.d))
    a[1] = -a[1]
    m = assemble_propus(circulant(a), circulant(b), circulant(b), circulant(d))
    assert not m.is_symmetric


def test_product_group_rejected():
    f = next(e.family for e in CORPUS if not e.family.group.is_cyclic)
    with pytest.raises(UnsupportedGroupError):
        family_to_matrix(f)


def test_export_pbm_and_text():
    assert export_matrix(PropusMatrix.certify(np.array([[1]]))) == b"P1\n1 1\n0\n"
    m = family_to_matrix(_fam("(47;20,22,22,18;35)"))
    pbm = export_matrix(m, "pbm")
    assert pbm.startswith(b"P1\n188 188\n")
    assert all(len(line) <= 70 for line in pbm.splitlines())
    assert np.array_equal(import_matrix(pbm), m.entries)
    txt = export_matrix(m, "text")
    assert txt.count(b"\n") == 188 and set(txt) <= set(b"+-\n")
    assert np.array_equal(import_matrix(txt), m.entries)
    with pytest.raises(DomainError):
        export_matrix(m, "png")


def test_is_hadamard_rejects_non_pm1():
    assert not is_hadamard(np.array([[1, 0], [0, 1]]))
    assert is_hadamard(np.array([[1, 1], [1, -1]]))
