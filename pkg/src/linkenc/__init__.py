"""Link-adaptive encryption simulator.

A variable-block-length Rijndael cipher run in ECB/CBC over a bit-error
channel, with closed-form block-length adaptation under a mean-security
constraint and throughput/security/vulnerability accounting.
"""

from .rijndael import (
    BLOCK_BITS_CHOICES,
    CipherParams,
    decrypt_block,
    decrypt_blocks,
    encrypt_block,
    encrypt_blocks,
    key_expand,
)
from .modes import (
    FramePayload,
    cbc_decrypt,
    cbc_encrypt,
    ecb_decrypt,
    ecb_encrypt,
    parse_frame,
    serialize_frame,
)
from .channel import (
    ChannelState,
    ChannelTrace,
    ber_from_snr,
    generate_trace,
    load_ber_table,
    substream,
    transmit,
)
from .adaptive import (
    Allocation,
    SecurityConstraint,
    optimal_block_length,
    quantize,
    required_security,
    select_adaptive,
    select_fixed,
)
from .metrics import (
    AdversaryModel,
    analytic_block_throughput,
    empirical_throughput,
    message_throughput,
    security_level,
    vulnerability,
)
from .sim import (
    ExperimentConfig,
    SweepReport,
    SweepRow,
    emit_csv,
    emit_tradeoff_curve,
    run_sweep,
)

__version__ = "0.1.0"
