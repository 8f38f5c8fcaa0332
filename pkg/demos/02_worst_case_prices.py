"""Instance families that push the price of representation to its limits.

Three generators, three stories:

* ``unbounded_price_instance``: with external scores the price has no
  ceiling at all; shrinking epsilon drives it arbitrarily high.
* ``diverse_approval_worst_case``: under approval-dependent rules the
  price never exceeds k, and this family meets k exactly.
* ``cohesive_groups_worst_case``: when gamma cohesive groups cover the
  population the ceiling drops to k/(k - gamma), met exactly here.

Run with: python3 demos/02_worst_case_prices.py
"""

from fractions import Fraction

from jrselect import (
    EXTERNAL,
    MAXIMIN_DIVERSE_APPROVAL,
    cohesive_groups_worst_case,
    diverse_approval_worst_case,
    price_of_jr,
    unbounded_price_instance,
)


def main() -> None:
    print("external scores admit unbounded prices (k=2, c=1):")
    for epsilon in (0.1, 0.01, 0.001):
        instance = unbounded_price_instance(k=2, epsilon=epsilon, c=1.0)
        price = price_of_jr(instance, EXTERNAL, method="exact").price
        formula = (1.0 + epsilon) / (2 * epsilon)
        print(f"  epsilon={epsilon:>6}: price {price:>8.1f} (formula {formula:.1f})")

    print("\napproval-dependent rules cap the price at k; this family meets it:")
    for n, k in ((6, 3), (12, 4), (20, 5)):
        instance = diverse_approval_worst_case(n, k)
        price = price_of_jr(instance, MAXIMIN_DIVERSE_APPROVAL, method="exact").price
        print(f"  n={n:>2}, k={k}: exact maximin-diverse-approval price {price} = k")

    print("\ngamma covering cohesive groups lower the cap to k/(k - gamma):")
    for n, k, gamma in ((12, 4, 2), (10, 5, 1), (12, 6, 3)):
        instance = cohesive_groups_worst_case(n, k, gamma)
        price = price_of_jr(instance, EXTERNAL, method="exact").price
        print(
            f"  n={n:>2}, k={k}, gamma={gamma}: price {price} "
            f"= {Fraction(k, k - gamma)}"
        )


if __name__ == "__main__":
    main()
