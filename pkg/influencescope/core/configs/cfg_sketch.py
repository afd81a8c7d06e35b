from influencescope.core.configs.config import CN
from influencescope.register import register_config


def extend_sketch_cfg(cfg):
    # ------------------------------------------------------------------------ #
    # RR set sketch related options
    # ------------------------------------------------------------------------ #
    cfg.sketch = CN()

    # relative error and failure probability shared by every tracker
    cfg.sketch.eps = 0.1
    cfg.sketch.delta = 0.001
    # hard cap on the number of RR sets in one pool, guards the rebalance loop
    cfg.sketch.max_sets = 50000000
    # how affected RR sets are refreshed after an edge weight update
    cfg.sketch.refresh = 'resample_at_vertex'

    # --------------- register corresponding check function ----------
    cfg.register_cfg_check_fun(assert_sketch_cfg)


def assert_sketch_cfg(cfg):
    if cfg.sketch.eps <= 0:
        raise ValueError(
            f"Value of 'cfg.sketch.eps' must be positive, but got {cfg.sketch.eps}."
        )
    if not 0 < cfg.sketch.delta < 1:
        raise ValueError(
            f"Value of 'cfg.sketch.delta' must be in (0, 1), but got {cfg.sketch.delta}."
        )
    assert cfg.sketch.max_sets >= 1, \
        "Please use a positive integer to indicate cfg.sketch.max_sets"
    if cfg.sketch.refresh not in ['resample_at_vertex']:
        raise ValueError(
            f"Value of 'cfg.sketch.refresh' must be 'resample_at_vertex', but got {cfg.sketch.refresh}."
        )


register_config("sketch", extend_sketch_cfg)
