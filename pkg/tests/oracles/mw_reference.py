"""Brute-force Mann-Whitney reference: naive pair counting and full labeling
enumeration. Deliberately avoids the rank-sum formula the production code
uses so the two implementations share nothing but the definition.
"""

import itertools


def u_pairs(a, b) -> float:
    """Pairs with a-value below b-value, plus half a point per tie."""
    u = 0.0
    for x in a:
        for y in b:
            if x < y:
                u += 1.0
            elif x == y:
                u += 0.5
    return u


def exact_two_sided_p(a, b) -> float:
    pooled = list(a) + list(b)
    m = len(a)
    le = ge = total = 0
    u_obs = u_pairs(a, b)
    for idx in itertools.combinations(range(len(pooled)), m):
        chosen = set(idx)
        ga = [pooled[i] for i in idx]
        gb = [pooled[i] for i in range(len(pooled)) if i not in chosen]
        u = u_pairs(ga, gb)
        total += 1
        if u <= u_obs:
            le += 1
        if u >= u_obs:
            ge += 1
    return min(1.0, 2.0 * min(le, ge) / total)


if __name__ == "__main__":
    print("U([1,2,3],[1,2,3]) =", u_pairs([1, 2, 3], [1, 2, 3]))
    print("U([1,2,3],[4,5,6]) =", u_pairs([1, 2, 3], [4, 5, 6]))
    print("U([1,3],[2,4])     =", u_pairs([1, 3], [2, 4]))
    print("p([1,2,3],[4,5,6]) =", exact_two_sided_p([1, 2, 3], [4, 5, 6]))
    print("p([1,3],[2,4])     =", exact_two_sided_p([1, 3], [2, 4]))
