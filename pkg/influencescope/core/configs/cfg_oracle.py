from influencescope.core.configs.config import CN
from influencescope.register import register_config


def extend_oracle_cfg(cfg):
    # ------------------------------------------------------------------------ #
    # Ground truth related options
    # ------------------------------------------------------------------------ #
    cfg.oracle = CN()

    cfg.oracle.max_configs = 2**20
    cfg.oracle.mc_iterations = 10000
    # size of the independent RR pool used to evaluate seed sets
    cfg.oracle.eval_pool_size = 100000

    # --------------- register corresponding check function ----------
    cfg.register_cfg_check_fun(assert_oracle_cfg)


def assert_oracle_cfg(cfg):
    assert cfg.oracle.max_configs >= 1, \
        "Please use a positive integer to indicate cfg.oracle.max_configs"
    assert cfg.oracle.mc_iterations >= 1, \
        "Please use a positive integer to indicate cfg.oracle.mc_iterations"
    assert cfg.oracle.eval_pool_size >= 1, \
        "Please use a positive integer to indicate cfg.oracle.eval_pool_size"


register_config("oracle", extend_oracle_cfg)
