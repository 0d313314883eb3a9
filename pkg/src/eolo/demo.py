"""Bundled demo instances."""

from .model import Instance, make_instance


def triangle() -> Instance:
    """Three records, all three pairs at p = 0.5.

    The smallest instance where transitive deduction changes the
    expected cost: the correct model prices it at 2.4 questions while
    the independence estimator says 2.25.
    """
    return make_instance(
        ["a", "b", "c"],
        [("a", "b", 0.5), ("a", "c", 0.5), ("b", "c", 0.5)],
    )


BUNDLED: dict[str, Instance] = {"triangle": triangle()}
