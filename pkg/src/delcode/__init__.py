"""Binary codes correcting k worst-case deletions with logarithmic redundancy,
plus the k-total-insertion/deletion variant, channel simulators, and
small-scale exhaustive verification oracles."""

from .bits import (apply_deletions, apply_edit_script, channel_delete,
                   channel_indel, enumerate_subsequences,
                   enumerate_supersequences, is_subsequence, lcs_length, mu)
from .blockhash import Hash2Digest, hash2, hash2_decode, hash2_decode_indel
from .codec import (decode, decode_indel, encode, encode_indel, geometry,
                    rep_decode_deletions, rep_decode_indel, rep_encode)
from .coloring import (ColorTable, Hash1Digest, build_color_table,
                       get_table, greedy_code_census, hash1, hash1_decode,
                       max_linear_dimension, verify_deletion_code)
from .errors import (CapacityError, DelcodeError, FormatError, MixednessError,
                     ParameterError)
from .gf import GF, RsParity, field_ops, rs_correct, rs_parity
from .mixer import (ParameterSet, derive_params, find_split_points, is_mixed,
                    params_from_text, params_to_text, smallest_desk_n,
                    template_search)
from .patternhash import (G_mixed, H_mixed, MixedHash, PatternHash,
                          SegmentSplit, g_pattern, h_pattern, segment_digest,
                          split_by_pattern)
from .vt import VtSyndrome, vt_decode, vt_members, vt_syndrome

__version__ = "0.1.0"
