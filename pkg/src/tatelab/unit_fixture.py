"""Validation of externally produced unit fixtures.

A fixture supplies, for a concrete arithmetic realization of an instance,
the S-unit module with its Galois action and, per tested class of the
minus-one cohomology of the class module, the 1-cocycle of unit values
attached to a generator choice, together with the flag recording whether
that generator lies in the product of the units and the base field.  The
checks here validate the cocycle identity, the coboundary biconditional
against both the flag and membership in the section-discrepancy subgroup,
and that the induced assignment is an injective homomorphism onto a
subgroup of H^1 of the units of the right order.
"""

from __future__ import annotations

from .abelian import ab_quotient
from .cohomology import CohClass, Cocycle1, TateCohomology
from .instance_io import FixtureSchemaError, fixture_from_dict
from .tate_sequence import subgroups_cdc


class InconsistentFixture(Exception):
    def __init__(self, class_index, reason):
        self.class_index = class_index
        self.reason = reason
        super().__init__(f"fixture class {class_index}: {reason}")


def fixture_unit_check(complex_, inst, fixture_data, cdc=None):
    """Run every fixture assertion; returns a list of check records.

    Raises FixtureSchemaError for malformed input and InconsistentFixture
    when an assertion fails with a class witness.
    """
    unit_module, classes, provenance = (
        fixture_data if isinstance(fixture_data, tuple)
        else fixture_from_dict(fixture_data, inst.group))
    ab = inst.cl.underlying
    cdc = cdc or subgroups_cdc(inst)
    records = []

    def record(name, ok, witness=None):
        records.append({"id": name, "ok": bool(ok), "witness": witness})

    cocycles = []
    for k, cls in enumerate(classes):
        try:
            w = Cocycle1(unit_module, cls["cocycle"])
        except ValueError as exc:
            raise InconsistentFixture(k, f"cocycle identity: {exc}") from exc
        total = ab.zero()
        for q in inst.aux_places:
            a = cls["aux_coeffs"].get(q.id, 0)
            if a:
                total = ab.add(total, ab.smul(a, q.frobenius))
        nu = inst.cl.norm_map()
        if not ab.is_zero(nu.apply(total)):
            raise InconsistentFixture(k, "coefficients do not define a "
                                      "norm-killed class")
        cocycles.append((k, w, total, cls["a_in_units_times_K"]))
    record("fixture.cocycle_identity", True, {"classes": len(classes)})

    # coboundary <-> unit flag <-> class in the discrepancy subgroup
    cbar_lat = cdc.cbar_incl.image_lattice()
    for k, w, total, flag in cocycles:
        is_cob, _ = w.is_coboundary()
        cls_h1 = cdc.h1.from_canon(cdc.cl_fn.h1_class(total))
        in_cbar = cbar_lat.contains(cls_h1)
        if is_cob != flag:
            raise InconsistentFixture(k, f"coboundary={is_cob} but unit "
                                      f"flag={flag}")
        if is_cob != in_cbar:
            raise InconsistentFixture(k, f"coboundary={is_cob} but class "
                                      f"in discrepancy subgroup={in_cbar}")
    record("fixture.biconditional", True, None)

    # the induced map H^-1(Cl)/Cbar -> H^1(U)
    calc_u = TateCohomology(complex_, unit_module)
    h1u = calc_u.homology(1)
    cbar_gens = [cdc.cbar_incl.apply(cdc.cbar.gen(j))
                 for j in range(cdc.cbar.n)]
    quot, proj = ab_quotient(cdc.h1, cbar_gens)
    assign = {}
    for k, w, total, flag in cocycles:
        key = quot.canon(proj.apply(
            cdc.h1.from_canon(cdc.cl_fn.h1_class(total))))
        val = CohClass(calc_u, 1, w.as_cochain())
        if key in assign:
            if assign[key] != val:
                raise InconsistentFixture(k, "classes in the same coset "
                                          "have non-cohomologous cocycles")
        else:
            assign[key] = val
    covered = {quot.canon(e) for e in quot.elements()}
    if set(assign) != covered:
        missing = sorted(covered - set(assign))
        raise InconsistentFixture("-", f"fixture does not cover every coset "
                                  f"(missing {missing})")
    # homomorphism and injectivity on the covered quotient
    items = sorted(assign.items())
    for key_x, val_x in items:
        for key_y, val_y in items:
            key_sum = quot.canon(quot.add(quot.from_canon(key_x),
                                          quot.from_canon(key_y)))
            want = val_x.add(val_y)
            if assign[key_sum] != want:
                raise InconsistentFixture("-", f"assignment not additive at "
                                          f"{key_x} + {key_y}")
    vals = [v.canon for _, v in items]
    if len(set(vals)) != len(vals):
        raise InconsistentFixture("-", "assignment is not injective")
    record("fixture.injective_hom", True,
           {"image": len(set(vals)), "quotient": quot.order()})
    record("fixture.order_match", len(set(vals)) == quot.order(),
           {"image": len(set(vals)), "quotient": quot.order()})
    return records
