from influencescope.core.configs.config import CN
from influencescope.register import register_config

EPSILON = 1e-9


def extend_stream_cfg(cfg):
    # ------------------------------------------------------------------------ #
    # Update stream synthesis related options
    # ------------------------------------------------------------------------ #
    cfg.stream = CN()

    # E1 (kept in base), E2 (decrease + increase churn), E3 (inserted)
    cfg.stream.fractions = [0.85, 0.05, 0.10]
    cfg.stream.full_graph = ''
    cfg.stream.base_out = 'base.graph'
    cfg.stream.stream_out = 'updates.stream'

    # --------------- register corresponding check function ----------
    cfg.register_cfg_check_fun(assert_stream_cfg)


def assert_stream_cfg(cfg):
    fractions = cfg.stream.fractions
    if len(fractions) != 3:
        raise ValueError(
            f"'cfg.stream.fractions' needs exactly 3 values, but got {fractions}."
        )
    if fractions[0] <= 0 or fractions[1] < 0 or fractions[2] < 0:
        raise ValueError(
            f"The base fraction must be positive and the others non-negative, but got {fractions}."
        )
    if abs(sum(fractions) - 1) > EPSILON:
        raise ValueError(
            f"The sum of 'cfg.stream.fractions' ({fractions}) should be 1.")


register_config("stream", extend_stream_cfg)
