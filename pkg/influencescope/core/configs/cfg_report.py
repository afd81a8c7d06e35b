from influencescope.core.configs.config import CN
from influencescope.register import register_config


def extend_report_cfg(cfg):
    # ------------------------------------------------------------------------ #
    # Run report related options
    # ------------------------------------------------------------------------ #
    cfg.report = CN()

    # JSON-lines output, '' writes to `outdir/report.jsonl`
    cfg.report.out = ''
    # append one aggregate record at the end of the run
    cfg.report.summary = False
    # wall times make reports differ between otherwise identical runs
    cfg.report.record_time = False


register_config("report", extend_report_cfg)
