"""
Running statistics and wall-clock timing

AverageMeter keeps (count, mean, M2) so partial results from independent workers can be merged
exactly; the benchmark uses it for repeated selection timings, the Monte-Carlo estimator for
blocks of walks.
"""

import math
import time


class AverageMeter(object):
    """Streaming mean and variance (Welford), mergeable across partial summaries"""

    def __init__(self):
        self.reset()

    def reset(self):
        self.val = 0.0
        self.count = 0
        self.avg = 0.0
        self.m2 = 0.0

    @classmethod
    def from_summary(cls, count, mean, m2):
        meter = cls()
        meter.count, meter.avg, meter.m2 = int(count), float(mean), float(m2)
        return meter

    def update(self, val):
        self.val = val
        self.count += 1
        delta = val - self.avg
        self.avg += delta / self.count
        self.m2 += delta * (val - self.avg)

    def merge(self, other):
        """pairwise combination of two summaries, in place"""
        if other.count == 0:
            return self
        if self.count == 0:
            self.count, self.avg, self.m2 = other.count, other.avg, other.m2
            return self
        n = self.count + other.count
        delta = other.avg - self.avg
        self.m2 += other.m2 + delta * delta * self.count * other.count / n
        self.avg += delta * other.count / n
        self.count = n
        return self

    @property
    def var(self):
        """population variance"""
        return self.m2 / self.count if self.count else 0.0

    @property
    def stderr(self):
        """standard error of the mean (sample variance)"""
        if self.count < 2:
            return 0.0
        return math.sqrt(self.m2 / (self.count - 1) / self.count)


class Timer(object):
    """Wall-clock timer in milliseconds."""

    def __init__(self):
        self.reset()

    def reset(self):
        self.total_time = 0.
        self.calls = 0
        self.start_time = 0.
        self.diff = 0.
        self.avg = 0.

    def tic(self):
        self.start_time = time.perf_counter()

    def toc(self, average=True):
        self.diff = (time.perf_counter() - self.start_time) * 1000.0
        self.total_time += self.diff
        self.calls += 1
        self.avg = self.total_time / self.calls
        return self.avg if average else self.diff

    def __enter__(self):
        self.tic()
        return self

    def __exit__(self, *exc):
        self.toc()
        return False
