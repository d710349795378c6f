import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vsdslayout.catalog import (
    CatalogError,
    ConfigurationSpace,
    build_gene_layout,
    configuration_count,
    decode,
    default_catalog_path,
    expand_subdivisions,
    load_catalog,
    occupation_rate,
    scale_for_occupation_rate,
)
from vsdslayout.geometry import ContainerDisk


@pytest.fixture(scope="module")
def appendix():
    return load_catalog(default_catalog_path())


@pytest.fixture(scope="module")
def toy():
    return load_catalog(default_catalog_path("toy.json"))


def one(**over):
    entry = {"id": "X", "kind": "diverse", "geometry": "cylinder", "d1": 10, "mass": 1, "subdivisions": [1]}
    entry.update(over)
    return {"components": [entry]}


# --- loading -----------------------------------------------------------------

def test_appendix_has_twelve_components(appendix):
    assert len(appendix) == 12
    kinds = [c.kind for c in appendix]
    assert kinds.count("fuel") == 3 and kinds.count("energy") == 2 and kinds.count("diverse") == 7


def test_appendix_rows(appendix):
    f1 = appendix[0]
    assert (f1.kind, f1.geometry, f1.d1, f1.mass, f1.subdivisions) == ("fuel", "cylinder", 100, 15, (1, 2, 3))
    d3 = next(c for c in appendix if c.id == "D3")
    assert (d3.d1, d3.d2, d3.mass, d3.subdivisions) == (150, 150, 12, (1, 2, 4))
    assert appendix.total_mass == pytest.approx(115.0)


def test_empty_component_list():
    with pytest.raises(CatalogError, match="catalog must contain at least one component"):
        load_catalog({"components": []})


def test_zero_mass_rejected():
    with pytest.raises(CatalogError, match="mass"):
        load_catalog(one(mass=0))


@pytest.mark.parametrize("doc, needle", [
    (one(colour="red"), "colour"),
    (one(kind="plasma"), "kind"),
    (one(geometry="cuboid"), "d2"),
    (one(subdivisions=[]), "subdivisions"),
    (one(subdivisions=[0]), "subdivisions"),
    (one(d1=-3), "d1"),
    ({"components": [one()["components"][0], one()["components"][0]]}, "duplicate"),
    ({"components": [], "extra": 1}, "extra"),
])
def test_schema_errors_name_the_field(doc, needle):
    with pytest.raises(CatalogError) as exc:
        load_catalog(doc)
    assert needle in str(exc.value)


def test_errors_are_collected():
    doc = {"components": [one(mass=0)["components"][0], one(id="Y", kind="x")["components"][0]]}
    with pytest.raises(CatalogError) as exc:
        load_catalog(doc)
    assert len(exc.value.errors) == 2


def test_load_from_json_text_and_path(tmp_path, toy):
    text = open(default_catalog_path("toy.json")).read()
    assert load_catalog(text).components == toy.components
    p = tmp_path / "c.json"
    p.write_text(text)
    assert load_catalog(str(p)).components == toy.components
    with pytest.raises(CatalogError, match="invalid JSON"):
        load_catalog("{not json")


def test_radius_convention():
    cat = load_catalog({**one(d1=10), "cylinder_dimension": "radius"})
    assert cat[0].radius == 10
    assert load_catalog(one(d1=10))[0].radius == 5


# --- subdivisions ------------------------------------------------------------

def test_identity_subdivision(appendix):
    (part,) = expand_subdivisions(appendix[0], 1)
    assert part.radius == pytest.approx(50.0) and part.mass == 15


def test_fuel_cylinder_split_in_three(appendix):
    parts = expand_subdivisions(appendix[0], 3)
    assert len(parts) == 3
    for p in parts:
        assert 2 * p.radius == pytest.approx(100 / math.sqrt(3), rel=1e-12)
        assert p.mass == pytest.approx(5.0)
    assert sum(p.area for p in parts) == pytest.approx(appendix[0].area, rel=1e-12)


def test_cuboid_split_in_four():
    cat = load_catalog({"components": [{"id": "E", "kind": "energy", "geometry": "cuboid", "d1": 200, "d2": 200,
                                        "mass": 10, "subdivisions": [1, 4]}]})
    parts = expand_subdivisions(cat[0], 4)
    assert [(p.width, p.height) for p in parts] == [pytest.approx((100.0, 100.0))] * 4
    assert sum(p.width * p.height for p in parts) == pytest.approx(4e4)


def test_inadmissible_subdivision(appendix):
    with pytest.raises(ValueError, match="F1.*subdivision 4"):
        expand_subdivisions(appendix[0], 4)


def test_conservation_for_every_option(appendix):
    for c in appendix:
        for k in c.subdivisions:
            parts = expand_subdivisions(c, k)
            assert sum(p.area for p in parts) == pytest.approx(c.area, rel=1e-9)
            assert sum(p.mass for p in parts) == pytest.approx(c.mass, rel=1e-9)


# --- configuration space -----------------------------------------------------

def test_configuration_counts(appendix, toy):
    assert configuration_count(appendix) == 3888
    assert configuration_count(toy) == 4
    assert configuration_count(ConfigurationSpace(((1,),))) == 1
    assert configuration_count(load_catalog(one(subdivisions=[1, 2, 5]))) == 3


def test_index_round_trip(appendix):
    space = appendix.space
    for i in range(0, space.size, 97):
        assert space.index(space.selection(i)) == i
    with pytest.raises(ValueError):
        space.selection(space.size)


# --- gene layout -------------------------------------------------------------

def test_appendix_gene_count(appendix):
    lay = build_gene_layout(appendix, 400.0, "cartesian")
    assert lay.length == 129
    assert lay.length == 2 * lay.n_cylinder_parts + 3 * lay.n_cuboid_parts


def test_toy_gene_count(toy):
    lay = build_gene_layout(toy, 130.0, "polar")
    assert lay.length == 12
    assert np.all(lay.upper[1::2] == pytest.approx(2 * math.pi))


def test_single_cuboid_layout():
    cat = load_catalog(one(geometry="cuboid", d2=5))
    lay = build_gene_layout(cat, 10.0)
    assert lay.length == 3
    assert list(lay.lower) == [-10, -10, 0] and list(lay.upper) == pytest.approx([10, 10, 2 * math.pi])


def test_gene_order_is_catalog_then_option_then_part(appendix):
    lay = build_gene_layout(appendix, 400.0)
    keys = [(s.component, s.option, s.part.part_index) for s in lay.slots]
    assert keys == sorted(keys)
    assert [s.offset for s in lay.slots] == list(np.cumsum([0] + [s.size for s in lay.slots])[:-1])


def test_bad_parameterization(toy):
    with pytest.raises(ValueError):
        build_gene_layout(toy, 1.0, "spherical")


# --- decoding ----------------------------------------------------------------

def test_toy_whole_whole_gives_two_disks(toy):
    lay = build_gene_layout(toy, 130.0, "polar")
    genes = np.linspace(1, 2, lay.length)
    inst = decode(genes, (0, 0), lay)
    assert len(inst) == 2 and all(s.is_disk for s in inst.shapes)
    # polar genes: radius then angle
    assert inst.shapes[0].center == pytest.approx((genes[0] * math.cos(genes[1]), genes[0] * math.sin(genes[1])))


def test_decode_counts_and_area(appendix):
    lay = build_gene_layout(appendix, 400.0)
    rng = np.random.default_rng(0)
    for _ in range(50):
        sel = appendix.space.selection(int(rng.integers(appendix.space.size)))
        inst = decode(rng.uniform(lay.lower, lay.upper), sel, lay)
        assert len(inst) == sum(c.subdivisions[k] for c, k in zip(appendix, sel))
        assert sum(s.area for s in inst.shapes) == pytest.approx(appendix.total_area, rel=1e-9)


def test_decode_errors(toy):
    lay = build_gene_layout(toy, 130.0, "polar")
    with pytest.raises(ValueError):
        decode(np.zeros(lay.length), (0, 2), lay)
    with pytest.raises(ValueError):
        decode(np.zeros(lay.length - 1), (0, 0), lay)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 3887), st.integers(0, 128), st.floats(-400, 400), st.integers(0, 2**32 - 1))
def test_hidden_genes_do_not_change_decoding(index, gene, value, seed):
    cat = load_catalog(default_catalog_path())
    lay = build_gene_layout(cat, 400.0)
    sel = cat.space.selection(index)
    genes = np.random.default_rng(seed).uniform(lay.lower, lay.upper)
    mask = lay.active_gene_mask(sel)
    if mask[gene]:
        return
    other = genes.copy()
    other[gene] = value
    assert decode(genes, sel, lay) == decode(other, sel, lay)


def test_decode_is_pure(appendix):
    lay = build_gene_layout(appendix, 400.0)
    g = np.random.default_rng(3).uniform(lay.lower, lay.upper)
    sel = (1,) * 5 + (0,) * 7
    assert decode(g, sel, lay) == decode(g.copy(), sel, lay)


# --- occupation rate ---------------------------------------------------------

def test_rescale_to_same_rate_is_identity(appendix):
    c = ContainerDisk(math.sqrt(appendix.total_area / (0.3 * math.pi)))
    same = scale_for_occupation_rate(appendix, 0.3, c)
    for a, b in zip(appendix, same):
        assert b.d1 == pytest.approx(a.d1, rel=1e-12)


def test_rescale_thirty_to_seventy(appendix):
    c = ContainerDisk(math.sqrt(appendix.total_area / (0.3 * math.pi)))
    big = scale_for_occupation_rate(appendix, 0.7, c)
    for a, b in zip(appendix, big):
        assert b.d1 / a.d1 == pytest.approx(math.sqrt(7 / 3), rel=1e-12)
        assert b.mass == a.mass
        if a.d2 is not None:
            assert b.d2 / a.d2 == pytest.approx(math.sqrt(7 / 3), rel=1e-12)
    assert occupation_rate(big, c) == pytest.approx(0.7, rel=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 0.99), st.floats(100, 2000))
def test_rescale_hits_target(rate, radius):
    cat = load_catalog(default_catalog_path())
    c = ContainerDisk(radius)
    assert occupation_rate(scale_for_occupation_rate(cat, rate, c), c) == pytest.approx(rate, rel=1e-9)


@pytest.mark.parametrize("rate", [0.0, 1.0, -0.2, 1.5])
def test_rescale_rejects_out_of_range(appendix, rate):
    with pytest.raises(ValueError):
        scale_for_occupation_rate(appendix, rate, ContainerDisk(100))


def test_bundled_files_are_valid_json():
    for name in ("appendix_a.json", "toy.json"):
        with open(default_catalog_path(name)) as fh:
            assert isinstance(json.load(fh), dict)
