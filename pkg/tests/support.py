"""Shared test helpers: scripted rngs and element shorthands."""

from makpabe.groups import Role


class SeqRng:
    """Pops a preloaded list of values; fails loudly when a draw falls
    outside the requested range, so scripted tests stay honest."""

    def __init__(self, values):
        self.values = list(values)

    def randrange(self, lo, hi=None):
        if hi is None:
            lo, hi = 0, lo
        v = self.values.pop(0)
        if not lo <= v < hi:
            raise AssertionError(f"scripted draw {v} outside [{lo}, {hi})")
        return v

    def getrandbits(self, k):
        return self.values.pop(0)


def key_elem(ctx, k):
    return ctx.exp(ctx.generator(Role.KEY), k)


def cipher_elem(ctx, k):
    return ctx.exp(ctx.generator(Role.CIPHER), k)


def target_elem(ctx, k):
    return ctx.exp(ctx.generator(Role.TARGET), k)
