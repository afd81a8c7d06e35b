import influencescope.register as register


def get_metric(types):
    """
    Collect the registered metrics asked for in `types`; each registered
    function returns (name, metric) or None.
    """
    metrics = dict()
    for func in register.metric_dict.values():
        res = func(types)
        if res is not None:
            name, metric = res
            metrics[name] = metric
    return metrics
