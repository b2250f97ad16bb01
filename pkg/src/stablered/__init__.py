"""Exact invariants of three point covers with bad reduction at p.

Library layout:

- fields: arithmetic over F_{p^s}, polynomials, rational functions, the
  Cartier operator on the rational function field
- superelliptic: cyclic covers z^m = f(x), places, genus, the lifted
  Cartier operator and the logarithmic/exact classification
- deformation: deformation data, critical invariants, signatures,
  normalized special data, signature enumeration
- tree: the dual tree with exact edge data, vanishing-cycle identities,
  structure classification, admissible-tree enumeration
- tails: local tail equations, normalization, metrics, germ reduction
- lifting: stable-field degree, patching counts, moduli degrees
- dessins: permutation triples, class counts, the end-to-end pipeline
- service / cli: HTTP endpoints and the command line client
"""

from .deformation import (DeformationDatum, Signature, build_normalized_special,
                          check_local_vcf, critical_invariants,
                          descend_by_kernel, enumerate_signatures, is_special)
from .dessins import (CycleType, DessinClass, PermGroupHandle, analyze_dessin,
                      cover_genus, enumerate_nielsen, monodromy_group_id,
                      n_prime_bounds, reduction_signature)
from .fields import (FieldElement, FiniteField, Polynomial, RationalDifferential,
                     RationalFunction, cartier_rational, dlog, exact)
from .lifting import (LiftingReport, SpecialGDatumSummary, moduli_degree,
                      patching_count, reduction_mildness, stable_field_degree)
from .superelliptic import (Classification, CurveDifferential, INFINITY,
                            SuperellipticCurve, build_curve, cartier,
                            classify_differential, differential_order,
                            eigencharacter)
from .tails import (GermVerdict, TailCover, apply_chain, build_tail,
                    classify_tail, germ_reduction, normalize_tail,
                    tail_metrics)
from .tree import (Edge, ReductionTree, classify_structure,
                   enumerate_admissible_trees, global_vcf, nu_profile,
                   tree_from_document, tree_to_document, validate_tree)

__version__ = "0.1.0"
