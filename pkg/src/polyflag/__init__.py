"""Mirror structures, polyhedral products, Coxeter chambers and pullbacks on finite complexes."""
from .errors import CapExceeded, CheckFailed, InputError, PolyflagError
from .simplicial import (Poset, SimplicialComplex, SimplicialMap, barycentric_subdivision,
                         clique_complex, full_subcomplex, is_coloring, is_conelike, is_flag,
                         is_nondegenerate, join, link, one_skeleton, order_complex)
from .homology import (CellComplex, HomologyProfile, chain_complex_of_simplicial, euler_characteristic,
                       homology, is_acyclic, is_homology_sphere_profile, smith_normal_form)

__version__ = "0.1.0"
