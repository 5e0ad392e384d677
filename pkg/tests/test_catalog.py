from sullivan_hfp.catalog import Factor, identify_catalog, product_of
from sullivan_hfp.cdga import free_algebra


def test_odd_spheres():
    C = free_algebra([("g1", 1), ("g3", 3)])
    assert str(identify_catalog(C)) == "S^1 x S^3"


def test_cp2():
    C = free_algebra([("x", 2), ("y", 5)], {"y": lambda g: g["x"] ** 3})
    assert str(identify_catalog(C)) == "CP^2"


def test_split_into_blocks():
    C = free_algebra([("g", 1), ("x", 2), ("y", 3)], {"y": lambda g: g["x"] ** 2})
    ident = identify_catalog(C)
    assert ident.key() == product_of(Factor("S", 1), Factor("S", 2)).key()


def test_even_sphere_with_extra_odd_generator():
    # x^2 and x^3 killed: S^4 times an odd sphere of degree 11
    C = free_algebra([("x", 4), ("y", 7), ("w", 11)],
                     {"y": lambda g: g["x"] ** 2, "w": lambda g: g["x"] ** 3})
    assert str(identify_catalog(C)) == "S^4 x S^11"


def test_grassmannian_block():
    # SO(6)/U(3): x1 (2), x2 (4); y2, y3, y4 in degrees 3, 5, 7
    C = free_algebra(
        [("x1", 2), ("x2", 4), ("y2", 3), ("y3", 5), ("y4", 7)],
        {"y2": lambda g: g["x1"] ** 2,
         "y3": lambda g: g["x1"] * g["x2"] * 2,
         "y4": lambda g: g["x2"] ** 2})
    assert str(identify_catalog(C)) == "SO(6)/U(3)"


def test_cp1_and_s2_agree():
    assert Factor("CP", 1).canonical() == Factor("S", 2)
    assert product_of(Factor("CP", 1)).key() == product_of(Factor("S", 2)).key()


def test_unknown():
    C = free_algebra([("x", 2), ("u", 3), ("y", 3)], {"y": lambda g: g["x"] ** 2 + g["x"] * 0})
    C2 = free_algebra([("p", 3), ("q", 3), ("r", 5)], {"r": lambda g: g["p"] * g["q"]})
    assert identify_catalog(C).known
    assert not identify_catalog(C2).known
    assert str(identify_catalog(free_algebra([]))) == "point"
