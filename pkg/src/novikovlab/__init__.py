"""Exact homological algebra over Laurent polynomial and Novikov rings."""
from .bicomplex import (DoubleComplexWindow, TotChoice, TotCocycle, Witness, check_cocycle,
                        check_tot_sum_is_torus, column_exact_at, compare_tot_with_torus, contract_lt,
                        contract_rt, from_columns, row_exact_at, torus_bicomplex, totalise,
                        validate_bicomplex, verify_witness)
from .complexes import (ChainMap, Check, CochainComplex, CohomologyGroup, CohomologyReport,
                        base_change, base_change_map, cohomology, cohomology_field, cohomology_int,
                        cone, is_quasi_iso, shift, split_cone, validate_chain_map, validate_complex)
from .errors import (ContractionError, DimensionError, NotAUnitError, NovikovLabError,
                     RingMismatchError, SchemaError, UnsupportedRingError, ValidationError,
                     WindowError)
from .linalg import (Matrix, SmithForm, det, det_laurent, nullspace_field, rank_field,
                     rank_laurent_fraction, rref_field, smith_normal_form, solve_field)
from .novikov import (FpPresentation, NovikovVerdict, VectorSeries, mapping_torus,
                      novikov_cohomology_field, novikov_verdict, novikov_verdict_field,
                      novikov_verdict_int, phi_fp, phi_free, phi_free_inverse, psi_fp, ranicki_check,
                      tensor_canonical)
from .rings import (QQ, ZZ, Fp, Laurent, LaurentPoly, RingTag, SeriesDir, SeriesWindow,
                    laurent_arith, novikov_unit, series_arith, series_invert)

__version__ = "0.1.0"
