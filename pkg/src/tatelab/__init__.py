"""tatelab: exact verification workbench for Tate cohomology of finite
groups and the connecting homomorphisms of class-field Tate sequences."""

from .abelian import (AbMap, FgAb, NonComplex, ab_kernel, ab_quotient,
                      fgab_from_relations, homology_at, subgroup_span)
from .cft import (AuxPlace, Instance, PlaceData, PlaceIsP0,
                  UnsatisfiableParams, c_p, i2_plain, i2_twist, norm_model,
                  quadratic_sqrt34, synth_instance, validate_instance,
                  xy_modules)
from .cohomology import (CohClass, Cocycle1, DegreeMismatch,
                         DegreeOutOfWindow, ExtensionData, TateCohomology,
                         TateComplex, WindowTooLarge, build_ext1_data,
                         cohomology, connecting_hom, cocycle_to_extension,
                         cup_with_h1, ext1_aug_to_h2, ext1_class_to_h2,
                         extension_to_cocycle, shapiro_hminus2)
from .gmodules import (GMap, GModule, HomModule, NotEquivariant, NotFree,
                       TensorModule, direct_sum, fixed_and_norm,
                       gmap_kernel_image, hom_and_tensor, perm_module,
                       regular_module, standard_modules, trivial_module)
from .groups import (FiniteGroup, GroupHom, NotACocycle, NotAGroup,
                     Subgroup, abelianization, cosets_and_reps, cyclic,
                     dihedral4, direct_product, extension_from_cocycle,
                     group_from_table, named_group, normal_closure,
                     quaternion8, subgroup_as_group, symmetric3)
from .lattice import IntMatrix, Lattice, matrix_kernel, smith_normal_form
from .tate_sequence import (ImageEscapesCl, NotNormKilled, build_delta1,
                            build_nabla, build_script_h, build_snake,
                            build_wrb, delta1, delta_minus2, norm_suite,
                            r_element, snake_closed_form, subgroups_cdc)
from .unit_fixture import InconsistentFixture, fixture_unit_check

__version__ = "0.1.0"


def build_complete_resolution(group, window=(-4, 3)):
    """Complete-resolution data for a finite group over a degree window."""
    return TateComplex(group, window)
