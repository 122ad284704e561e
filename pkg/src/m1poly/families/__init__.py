from .base import METHODS, OrthoData
from .bannaiito import (BannaiItoParams, Truncation, bannai_ito_eval, bannai_ito_table,
                        bi_norm, bi_ortho, bi_recurrence_coeffs, bi_truncation, bi_u)
from .bigjacobi import (BigJacobiParams, bigjacobi_eval, bigjacobi_mass_prefactor,
                        bigjacobi_norm, bigjacobi_table, bigjacobi_weight)
from .chihara import ChiharaParams, chihara_eval, chihara_table, chihara_weight
from .dualhahn import (DualHahnParams, dualhahn_eval, dualhahn_ortho, dualhahn_reversed,
                       dualhahn_table)

__all__ = [
    "METHODS", "OrthoData",
    "BannaiItoParams", "Truncation", "bannai_ito_eval", "bannai_ito_table", "bi_norm",
    "bi_ortho", "bi_recurrence_coeffs", "bi_truncation", "bi_u",
    "BigJacobiParams", "bigjacobi_eval", "bigjacobi_mass_prefactor", "bigjacobi_norm",
    "bigjacobi_table", "bigjacobi_weight",
    "ChiharaParams", "chihara_eval", "chihara_table", "chihara_weight",
    "DualHahnParams", "dualhahn_eval", "dualhahn_ortho", "dualhahn_reversed", "dualhahn_table",
]
