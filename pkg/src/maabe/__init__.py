"""Multi-authority attribute-based encryption with traceable keys.

K independent attribute authorities issue threshold-tree key shares, a
fully trusted central authority binds them to a registered identity
through a blinded issuance protocol, and a leaked key can be traced back
to its owner.  Two interchangeable pairing backends: a production
supersingular curve and a discrete-log oracle for exact algebraic
verification.
"""

from .access_tree import (
    AccessGate,
    AccessLeaf,
    AttributeId,
    format_tree,
    lagrange_coefficient,
    parse_tree,
    reconstruct_in_target,
    satisfies,
    share_secret,
)
from .authority import (
    AttributeKeyShare,
    AuthorityPublic,
    AuthoritySecret,
    authority_setup,
    issue_attribute_keys,
    prf_eval,
)
from .central import CASecret, TraceTable, ca_issue, register_user, trace
from .errors import MaabeError
from .groups import CurveGroup, OpCounters, ToyGroup, make_group
from .pok import (
    PokTranscript,
    extract_witness,
    pok_commit,
    pok_respond,
    pok_verify,
    prove_noninteractive,
    verify_noninteractive,
)
from .scheme import (
    Ciphertext,
    KeyRequest,
    MasterSecret,
    PartialKey,
    PublicParams,
    UserKey,
    decrypt,
    decrypt_hybrid,
    encrypt,
    encrypt_hybrid,
    finalize_key,
    global_setup,
    key_wellformed,
    rerandomize_key,
    request_key,
)

__version__ = "0.1.0"
