import json

import pytest

from tatelab.abelian import FgAb
from tatelab.cft import (AuxPlace, Instance, PlaceData, PlaceIsP0, c_p,
                         i2_plain, i2_twist, norm_model, quadratic_sqrt34,
                         synth_instance, validate_instance, xy_modules)
from tatelab.gmodules import trivial_module
from tatelab.groups import Subgroup, extension_from_cocycle, named_group
from tatelab.instance_io import (InstanceSchemaError, instance_digest,
                                 instance_from_dict, instance_to_dict,
                                 load_instance, save_instance)
from tatelab.lattice import IntMatrix


def test_worked_instances_validate():
    for mk in (i2_twist, i2_plain, quadratic_sqrt34):
        rep = validate_instance(mk())
        assert rep.clean, (mk.__name__, rep.violations)


def test_section_discrepancies():
    it = i2_twist()
    assert it.cl.underlying.is_zero(c_p(it, "p1", 0))
    assert it.cl.underlying.canon(c_p(it, "p1", 1)) == (1,)
    ip = i2_plain()
    for tau in (0, 1):
        assert ip.cl.underlying.is_zero(c_p(ip, "p1", tau))
    with pytest.raises(PlaceIsP0):
        c_p(it, "p0", 1)
    with pytest.raises(KeyError):
        it.place("nope")


def test_validation_violations():
    bad = i2_twist()
    bad.aux_places = [AuxPlace("q0", (0,))]
    rep = validate_instance(bad)
    assert any("generate" in v["check"] for v in rep.violations)
    bad2 = i2_twist()
    bad2.iota["p1"][1] = bad2.iota["p1"][0]
    assert not validate_instance(bad2).clean
    bad3 = i2_twist()
    bad3.places[1].is_p0 = True
    assert not validate_instance(bad3).clean
    bad4 = i2_twist()
    bad4.places[0] = PlaceData("p0", Subgroup(bad4.group, [0]), is_p0=True)
    rep4 = validate_instance(bad4)
    assert any("full decomposition" in v["check"] for v in rep4.violations)


def test_norm_model_values():
    nm_t = norm_model(i2_twist())
    assert nm_t.q.order() == 1
    nm_p = norm_model(i2_plain())
    assert nm_p.q.order() == 2
    img, _, _ = nm_p.nm.image()
    assert img.order() == 2  # surjective
    assert any(nm_p.class_in_q["q0"])
    # trivial group: Q is the class module and the map injective
    grp1 = named_group("1")
    cl1 = trivial_module(grp1, FgAb(1, IntMatrix([[3]])))
    gs1, kappa1, pi1, member1 = extension_from_cocycle(cl1, grp1,
                                                       lambda g, h: (0,))
    inst1 = Instance(grp1,
                     [PlaceData("p0", Subgroup(grp1, [0]), is_p0=True)],
                     [AuxPlace("q0", (1,))], cl1, gs1, pi1, kappa1,
                     {"p0": {0: gs1.identity}})
    assert validate_instance(inst1).clean
    nm1 = norm_model(inst1)
    assert nm1.q.order() == 3
    assert nm1.nm.kernel()[0].is_trivial()


def test_xy_modules():
    it = i2_twist()
    xy = xy_modules(it)
    assert xy.y.underlying.free_rank() == 2
    assert xy.x.underlying.free_rank() == 1
    q = quadratic_sqrt34()
    xy = xy_modules(q)
    assert xy.y.underlying.free_rank() == 4
    assert xy.x.underlying.free_rank() == 3
    assert xy.x.underlying.is_free()
    # augmentation kills X and is surjective
    for j in range(xy.x.underlying.n):
        assert sum(xy.x_incl.ab.mat.column(j)) == 0
    assert xy.aug.ab.is_surjective()
    # free-orbit place contributes a regular summand
    inf_cols = [xy.y_index[("inf", r)] for r in q.cosets["inf"][0]]
    assert len(inf_cols) == 2


def test_section_discrepancy_group_identity():
    # kappa(c_p(t1 t2)) = kappa(t2^-1 . c_p(t1)) kappa(c_p(t2)), asserted
    # as an identity in the extension group; follows from expanding the
    # product of sections.
    for gname, seed in [("C2", 0), ("C4", 2), ("S3", 1), ("V4", 0)]:
        inst = synth_instance(gname, seed)
        gs, grp, ab = inst.gs, inst.group, inst.cl.underlying
        for pl in inst.other_places():
            for t1 in pl.subgroup.elems:
                for t2 in pl.subgroup.elems:
                    lhs = inst.kappa[ab.canon(c_p(inst, pl.id,
                                                  grp.mul(t1, t2)))]
                    twisted = inst.cl.act(grp.inv[t2], c_p(inst, pl.id, t1))
                    rhs = gs.mul(inst.kappa[ab.canon(twisted)],
                                 inst.kappa[ab.canon(c_p(inst, pl.id, t2))])
                    assert lhs == rhs, (gname, seed, pl.id, t1, t2)


def test_synth_instances_deterministic_and_clean():
    for gname in ["C2", "C3", "C4", "V4", "S3"]:
        for seed in range(3):
            a = synth_instance(gname, seed)
            b = synth_instance(gname, seed)
            assert validate_instance(a).clean
            assert a.gs.table == b.gs.table
            assert a.kappa == b.kappa
            assert a.iota == b.iota
            assert [(q.id, q.frobenius) for q in a.aux_places] == \
                [(q.id, q.frobenius) for q in b.aux_places]
            assert instance_digest(a) == instance_digest(b)


def test_synth_c2_shape_matches_worked_instance():
    # a C2 synthetic instance has the same schema as the worked ones
    inst = synth_instance("C2", 0)
    d = instance_to_dict(inst)
    assert d["schema_version"] == "1"
    assert any(p["is_p0"] for p in d["places"])


def test_instance_io_roundtrip(tmp_path):
    for mk in (i2_twist, i2_plain, quadratic_sqrt34):
        inst = mk()
        path = tmp_path / "inst.json"
        save_instance(inst, str(path))
        back = load_instance(str(path))
        assert validate_instance(back).clean
        assert instance_to_dict(back) == instance_to_dict(inst)
        assert instance_digest(back) == instance_digest(inst)


def test_instance_io_errors(tmp_path):
    with pytest.raises(InstanceSchemaError):
        load_instance(str(tmp_path / "missing.json"))
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(InstanceSchemaError):
        load_instance(str(p))
    d = instance_to_dict(i2_twist())
    del d["schema_version"]
    with pytest.raises(InstanceSchemaError):
        instance_from_dict(d)
    d = instance_to_dict(i2_twist())
    d["group"]["table"] = [[0, 1], [0, 1]]
    with pytest.raises(InstanceSchemaError):
        instance_from_dict(d)
    d = instance_to_dict(i2_twist())
    d["kappa"] = [0, 0]
    with pytest.raises(InstanceSchemaError):
        instance_from_dict(d)


def test_shipped_data_files():
    import importlib.resources as res
    for name, mk in [("i2_twist", i2_twist), ("i2_plain", i2_plain),
                     ("sqrt34", quadratic_sqrt34)]:
        ref = res.files("tatelab") / "data" / f"{name}.json"
        data = json.loads(ref.read_text())
        inst = instance_from_dict(data)
        assert instance_to_dict(inst) == instance_to_dict(mk())
