import logging

import influencescope.register as register

logger = logging.getLogger(__name__)

TRACKER_TYPES = ['topk', 'im']


def get_tracker(kind, g, rng, config):
    """
    Build the tracker of `kind` on graph `g` from the config; registered
    trackers take precedence over the built-in ones.
    """
    for func in register.tracker_dict.values():
        tracker = func(kind, g, rng, config)
        if tracker is not None:
            return tracker

    if kind == 'topk':
        from influencescope.core.topk import TopKTracker
        return TopKTracker(g,
                           k=config.topk.k,
                           eps=config.sketch.eps,
                           delta=config.sketch.delta,
                           rng=rng,
                           max_sets=config.sketch.max_sets,
                           assert_invariants=config.assert_invariants)
    elif kind == 'im':
        from influencescope.core.immax import IMTracker
        return IMTracker(g,
                         k_max=config.im.k_max,
                         eps=config.im.eps,
                         delta=config.im.delta,
                         rng=rng,
                         mode=config.im.mode,
                         max_sets=config.sketch.max_sets,
                         assert_invariants=config.assert_invariants)
    raise ValueError(
        f'Tracker {kind} is not provided, choose from {TRACKER_TYPES}')
