"""Numerical certificates of quasi-positive curvature for homogeneous bundles."""

from .algebra import (
    AlgElement,
    FieldTag,
    GroupElement,
    Quaternion,
    adjoint,
    bracket,
    group_exp,
    identity,
    inner,
)
from .catalog import (
    CatalogEntry,
    build_entry,
    m_kl,
    pt_projective,
    sp_example,
    t1_projective,
    t1_sphere,
    t1s3_product,
)
from .certify import (
    CertReport,
    Method,
    StartBudget,
    Verdict,
    certify_part2,
    certify_part3,
    check_fatness,
    derivative_test,
    f_of_s,
    min_ad_singular,
    point_positivity,
    scan_along_A,
)
from .flatness import (
    FlatPairWitness,
    biinvariant_plane_curvature,
    eschenburg_residual,
    horizontal_flat_residual,
    symmetric_horizontal_residual,
)
from .triple import (
    DeformParam,
    Part,
    Subspace,
    Triple,
    deformed_inner,
    is_symmetric_pair,
    load_triple,
    make_triple,
    phi,
    phi_inv,
    project,
    randomly_rebased,
    save_triple,
    stabilizer_subalgebra,
    triple_from_dict,
    triple_to_dict,
)

__version__ = "0.1.0"
