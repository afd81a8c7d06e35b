from influencescope.core.monitors.monitor import Monitor
from influencescope.core.monitors.metric_calculator import MetricCalculator

__all__ = ['Monitor', 'MetricCalculator']
