"""Walk through the canonical bridge-conflict instance.

Twelve users split into two equal camps. Camp 0 approves item 0, camp 1
approves item 1, and a single bridge user in each camp also approves the
three crossover items 2, 3 and 4. Maximizing maximin diverse approval in
isolation picks only the crossover items and leaves ten of twelve users
without anything they approve; the representation constraint forces both
camp items in, at a third of the unconstrained score.

Run with: python3 demos/01_bridge_conflict.py
"""

from jrselect import (
    MAXIMIN_DIVERSE_APPROVAL,
    bridge_conflict_instance,
    greedy_cc,
    item_scores,
    optimal_jr_set_exact,
    optimal_set,
    price_of_jr,
    representation_report,
    verify_jr,
)


def main() -> None:
    instance = bridge_conflict_instance()
    rule = MAXIMIN_DIVERSE_APPROVAL
    print(f"n={instance.n} users, m={instance.m} items, committee size k={instance.k}")
    print(f"per-item maximin diverse approval scores: {item_scores(instance, rule)}")

    best = optimal_set(instance, rule)
    items = sorted(best.committee.items)
    print(f"\nunconstrained optimum: {items} with score {best.committee.score}")
    report = representation_report(items, instance, rule.name)
    print(
        f"  but it leaves {report.unrepresented_count} of {report.total_users} users "
        f"({report.unrepresented_fraction}) with nothing they approve"
    )
    witness = verify_jr(items, instance)
    print(
        f"  representation check fails: the {len(witness.group)} users {sorted(witness.group)} "
        f"all approve item {witness.item}, deserve a seat, and got none"
    )

    constrained = optimal_jr_set_exact(instance, rule)
    items = sorted(constrained.committee.items)
    print(f"\nbest representation-satisfying committee: {items} with score {constrained.committee.score}")
    report = representation_report(items, instance, rule.name)
    print(f"  unrepresented users: {report.unrepresented_count} of {report.total_users}")

    price = price_of_jr(instance, rule, method="exact")
    print(f"\nexact price of the constraint: {price.score_opt} / {price.score_constrained} = {price.price}")
    print(f"  (equal to k = {instance.k}: this instance meets the worst-case ceiling)")

    greedy = greedy_cc(instance, rule)
    print(
        f"\ngreedy selection: {sorted(greedy.committee.items)} "
        f"(first {greedy.justifying_prefix_size} picks cover unrepresented users, "
        f"the rest maximize the rule)"
    )


if __name__ == "__main__":
    main()
