import logging
import math

from influencescope.core.configs.config import CN
from influencescope.register import register_config

logger = logging.getLogger(__name__)

# 1 - 1/e - (2 - 1/e) * eps = 0.5
PRACTICAL_IM_EPS = (0.5 - 1 / math.e) / (2 - 1 / math.e)


def extend_tracker_cfg(cfg):
    # ------------------------------------------------------------------------ #
    # Top-k influential individuals tracking
    # ------------------------------------------------------------------------ #
    cfg.topk = CN()

    cfg.topk.k = 50

    # ------------------------------------------------------------------------ #
    # Influence maximization tracking
    # ------------------------------------------------------------------------ #
    cfg.im = CN()

    # 'practical' keeps a single pool, 'theoretical' splits R1 / R2
    cfg.im.mode = 'practical'
    cfg.im.eps = PRACTICAL_IM_EPS
    cfg.im.delta = 0.001
    cfg.im.k_max = 100
    # an IM query is inserted every `tau` updates
    cfg.im.tau = 1000

    # --------------- register corresponding check function ----------
    cfg.register_cfg_check_fun(assert_tracker_cfg)


def assert_tracker_cfg(cfg):
    if cfg.topk.k < 1:
        raise ValueError(
            f"Value of 'cfg.topk.k' must be positive, but got {cfg.topk.k}.")
    if cfg.sketch.eps > 1 / 3 or cfg.sketch.delta > 1 / 4:
        logger.warning(
            "The top-k guarantee requires eps <= 1/3 and delta <= 1/4, "
            f"got eps={cfg.sketch.eps} and delta={cfg.sketch.delta}; "
            "track-topk will refuse to start.")

    if cfg.im.mode not in ['practical', 'theoretical']:
        raise ValueError(
            "Value of 'cfg.im.mode' must be chosen from ['practical', 'theoretical'], "
            f"but got {cfg.im.mode}.")
    if cfg.im.eps <= 0 or not 0 < cfg.im.delta < 1:
        raise ValueError(
            f"Invalid IM parameters eps={cfg.im.eps}, delta={cfg.im.delta}.")
    assert cfg.im.k_max >= 1, "Please use a positive integer to indicate cfg.im.k_max"
    assert cfg.im.tau >= 1, "Please use a positive integer to indicate cfg.im.tau"


register_config("tracker", extend_tracker_cfg)
