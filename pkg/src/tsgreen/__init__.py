"""Trivial-source Green rings a(kG, triv) of small finite groups over finite fields.

The public surface is re-exported here; see the submodules for details.
"""
from .classifiers import (classify, galois_index_set, in_dr_p_star, is_k_dress, is_k_elementary,
                          is_q_dress, is_q_hyperelementary, is_r_hypoelementary, minimal_non_k_dress_shape)
from .config import RunConfig, __version__, get_config, set_config, using_config
from .decompose import decompose, higman_projective, is_indecomposable, is_trivial_source, iso, local_data, vertex
from .errors import TSGreenError
from .fields import FieldSpec, parse_field
from .greenring import classify_in_basis, induction_matrix, restriction_matrix, ts_basis
from .groups import (PermGroup, Subgroup, cyclic, dihedral, direct_product, enumerate_subgroups, o_lower,
                     o_upper, parse_group, quaternion8, quotient, semidirect_cyclic, symmetric, alternating)
from .modules import (Representation, hom_space, induce, inflate, perm_module, regular_module, restrict,
                      tensor, tensor_induce, trivial_module)
from .primordial import induction_lattice, is_primordial, prop35_certificate, verify_theorem

__all__ = [
    "FieldSpec", "PermGroup", "Representation", "RunConfig", "Subgroup", "TSGreenError", "__version__",
    "alternating", "classify", "classify_in_basis", "cyclic", "decompose", "dihedral", "direct_product",
    "enumerate_subgroups", "galois_index_set", "get_config", "higman_projective", "hom_space", "in_dr_p_star",
    "induce", "induction_lattice", "induction_matrix", "inflate", "is_indecomposable", "is_k_dress",
    "is_k_elementary", "is_primordial", "is_q_dress", "is_q_hyperelementary", "is_r_hypoelementary",
    "is_trivial_source", "iso", "local_data", "minimal_non_k_dress_shape", "o_lower", "o_upper",
    "parse_field", "parse_group", "perm_module", "prop35_certificate", "quaternion8", "quotient",
    "regular_module", "restrict", "restriction_matrix", "semidirect_cyclic", "set_config", "symmetric",
    "tensor", "tensor_induce", "trivial_module", "ts_basis", "using_config", "verify_theorem", "vertex",
]
