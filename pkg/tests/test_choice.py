import itertools
import random
import time
from fractions import Fraction

import numpy as np
from pytest import approx, mark, raises

from fairness_engine.agent import AgentSpec, Ballot, ProportionalFairnessAgent
from fairness_engine.allocation import Allocation
from fairness_engine.choice import (
    BallotProfile,
    BordaChoice,
    ChoiceConfig,
    CopelandChoice,
    RescoreChoice,
    borda_aggregate,
    build_ballots,
    copeland_aggregate,
    rescore,
)
from fairness_engine.agent.ranking import BinaryPreference
from fairness_engine.core import FeatureCatalog, ScoredList
from fairness_engine.utils.errors import InputError

from conftest import make_list

WEIGHTS = [Fraction(1, 5), Fraction(2, 5), Fraction(3, 5), Fraction(1)]


def profile(candidates, *ballots):
    return BallotProfile(tuple(candidates), tuple(Ballot(tuple(ranking), weight) for ranking, weight in ballots))


def brute_borda(candidates, ballots):
    m = len(candidates)
    scores = {item: Fraction(0) for item in candidates}
    for ranking, weight in ballots:
        for position, item in enumerate(ranking):
            scores[item] += weight * (m - 1 - position)
    return sorted(candidates, key=lambda item: (-scores[item], candidates.index(item)))


def brute_copeland(candidates, ballots):
    scores = {item: Fraction(0) for item in candidates}
    for x, y in itertools.permutations(candidates, 2):
        x_over_y = sum((w for r, w in ballots if r.index(x) < r.index(y)), Fraction(0))
        y_over_x = sum((w for r, w in ballots if r.index(y) < r.index(x)), Fraction(0))
        if x_over_y > y_over_x:
            scores[x] += 1
        elif x_over_y == y_over_x:
            scores[x] += Fraction(1, 2)
    return sorted(candidates, key=lambda item: (-scores[item], candidates.index(item)))


def random_profiles(seed, count):
    rnd = random.Random(seed)
    for _ in range(count):
        m = rnd.randint(3, 5)
        candidates = [chr(ord("A") + index) for index in range(m)]
        ballots = [(list(candidates), rnd.choice(WEIGHTS))]
        for _ in range(rnd.randint(0, 2)):
            ranking = list(candidates)
            rnd.shuffle(ranking)
            ballots.append((ranking, rnd.choice(WEIGHTS)))
        yield candidates, ballots


def as_profile(candidates, ballots):
    return profile(candidates, *[(ranking, float(weight)) for ranking, weight in ballots])


def test_ballot_weights_single_agent():
    rec = make_list("u", ["A", "B", "C"])
    built = build_ballots(rec, Allocation.single("a1"), {"a1": ("C", "A", "B")}, ChoiceConfig())
    assert [ballot.weight for ballot in built.ballots] == approx([0.6, 0.4])


def test_ballot_weights_empty_allocation():
    rec = make_list("u", ["A", "B", "C"])
    built = build_ballots(rec, Allocation.none(), {}, ChoiceConfig())
    assert len(built.ballots) == 1
    assert built.recommender.weight == approx(0.6)


def test_ballot_weights_shared_mode():
    rec = make_list("u", ["A", "B", "C"])
    allocation = Allocation("weighted", {"a1": 0.25, "a2": 0.75})
    rankings = {"a1": ("C", "A", "B"), "a2": ("B", "A", "C")}
    built = build_ballots(rec, allocation, rankings, ChoiceConfig())
    assert [ballot.weight for ballot in built.ballots] == approx([0.6, 0.1, 0.3])


def test_ballot_weights_per_agent_mode():
    rec = make_list("u", ["A", "B", "C"])
    allocation = Allocation("weighted", {"a1": 0.25, "a2": 0.75})
    rankings = {"a1": ("C", "A", "B"), "a2": ("B", "A", "C")}
    built = build_ballots(rec, allocation, rankings, ChoiceConfig(agent_weight_mode="per_agent"))
    assert [ballot.weight for ballot in built.ballots] == approx([0.6, 0.4, 0.4])


def test_profile_requires_recommender_first():
    with raises(InputError):
        profile(["A", "B"], (["B", "A"], 0.6))
    with raises(InputError):
        profile(["A", "B"], (["A", "B"], 0.6), (["A"], 0.4))


def test_borda_hand_example():
    result = borda_aggregate(profile(["A", "B", "C"], (["A", "B", "C"], 0.6), (["C", "A", "B"], 0.4)))
    assert result.items == ("A", "C", "B")
    assert result.scores == approx({"A": 1.6, "B": 0.6, "C": 0.8})


def test_borda_lone_ballot_and_unanimity():
    assert borda_aggregate(profile(["A", "B", "C"], (["A", "B", "C"], 0.6))).items == ("A", "B", "C")
    unanimous = profile(["A", "B", "C"], (["A", "B", "C"], 0.3), (["A", "B", "C"], 0.9))
    assert borda_aggregate(unanimous).items == ("A", "B", "C")


def test_copeland_lone_ballot():
    assert copeland_aggregate(profile(["A", "B", "C"], (["A", "B", "C"], 0.6))).items == ("A", "B", "C")


def test_copeland_condorcet_cycle_keeps_recommender_order():
    cycle = profile(["A", "B", "C"], (["A", "B", "C"], 1.0), (["B", "C", "A"], 1.0), (["C", "A", "B"], 1.0))
    result = copeland_aggregate(cycle)
    assert result.items == ("A", "B", "C")
    assert len(set(result.scores.values())) == 1


def test_copeland_heavier_recommender_wins():
    result = copeland_aggregate(profile(["A", "B", "C"], (["A", "B", "C"], 0.6), (["C", "A", "B"], 0.4)))
    assert result.items == ("A", "B", "C")


@mark.parametrize("seed", [0, 1, 2])
def test_borda_matches_exact_oracle(seed):
    for candidates, ballots in random_profiles(seed, 300):
        assert list(borda_aggregate(as_profile(candidates, ballots)).items) == brute_borda(candidates, ballots)


@mark.parametrize("seed", [0, 1, 2])
def test_copeland_matches_exact_oracle(seed):
    for candidates, ballots in random_profiles(seed, 300):
        assert list(copeland_aggregate(as_profile(candidates, ballots)).items) == brute_copeland(candidates, ballots)


def test_aggregates_are_permutations():
    for candidates, ballots in random_profiles(11, 100):
        built = as_profile(candidates, ballots)
        assert sorted(borda_aggregate(built).items) == sorted(candidates)
        assert sorted(copeland_aggregate(built).items) == sorted(candidates)


def test_rescore_hand_example():
    rec = ScoredList("u", (("A", 0.9), ("B", 0.5), ("C", 0.4)))
    preferences = {"a1": BinaryPreference(("C",), ("A", "B"))}
    result = rescore(rec, Allocation.single("a1"), preferences, ChoiceConfig(rule="rescore"))
    assert result.items == ("C", "A", "B")
    assert result.scores["C"] == approx(0.4 + 0.5 / 0.6)


def test_rescore_zero_delta_and_empty_allocation():
    rec = ScoredList("u", (("A", 0.9), ("B", 0.5), ("C", 0.4)))
    preferences = {"a1": BinaryPreference(("C",), ("A", "B"))}
    unchanged = rescore(rec, Allocation.single("a1"), preferences, ChoiceConfig(rule="rescore", delta=0.0))
    assert unchanged.items == rec.items
    assert rescore(rec, Allocation.none(), preferences, ChoiceConfig(rule="rescore")) == rec


def test_rescore_normalized_scores():
    rec = ScoredList("u", (("A", 10.0), ("B", 5.0), ("C", 0.0)))
    preferences = {"a1": BinaryPreference(("C",), ("A", "B"))}
    config = ChoiceConfig(rule="rescore", delta=0.5, normalize_scores=True)
    result = rescore(rec, Allocation.single("a1"), preferences, config)
    assert result.scores == approx({"A": 1.0, "B": 0.5, "C": 0.5 / 0.6})
    assert result.items == ("A", "C", "B")


@mark.parametrize("mechanism", [BordaChoice, CopelandChoice, RescoreChoice])
def test_mechanisms_return_candidates_without_agents(mechanism, catalog):
    rec = make_list("u", ["i5", "i0", "i6", "i1"], tick=4)
    agent = ProportionalFairnessAgent(AgentSpec("a1", "p", "gpf", 0.5), catalog)
    assert mechanism(ChoiceConfig()).choose(rec, Allocation.none(), {"a1": agent}) == rec


@mark.parametrize("mechanism", [BordaChoice, CopelandChoice, RescoreChoice])
def test_mechanisms_output_permutation(mechanism, catalog):
    rec = make_list("u", ["i5", "i0", "i6", "i1", "i7"], tick=4)
    agent = ProportionalFairnessAgent(AgentSpec("a1", "p", "gpf", 0.5), catalog)
    result = mechanism(ChoiceConfig()).choose(rec, Allocation.single("a1"), {"a1": agent})
    assert sorted(result.items) == sorted(rec.items)
    assert result.user_id == "u"
    assert result.produced_at == 4


def test_choice_config_validation():
    with raises(InputError):
        ChoiceConfig(recommender_weight=1.0)
    with raises(InputError):
        ChoiceConfig(delta=-0.1)
    with raises(InputError):
        ChoiceConfig(rule="plurality")


@mark.parametrize("factor", [0.25, 4.0])
def test_uniform_weight_scaling_keeps_orders(factor):
    for candidates, ballots in random_profiles(5, 200):
        built = as_profile(candidates, ballots)
        scaled = as_profile(candidates, [(ranking, weight * factor) for ranking, weight in ballots])
        assert borda_aggregate(scaled).items == borda_aggregate(built).items
        assert copeland_aggregate(scaled).items == copeland_aggregate(built).items


def random_rec_list(rnd, m):
    scores = sorted((round(rnd.uniform(0.0, 2.0), 2) for _ in range(m)), reverse=True)
    return ScoredList("u", tuple((f"i{index}", score) for index, score in enumerate(scores)))


@mark.parametrize("normalize", [False, True])
def test_rescore_never_demotes_protected_items(normalize):
    rnd = random.Random(17)
    config = ChoiceConfig(rule="rescore", normalize_scores=normalize)
    for _ in range(300):
        rec = random_rec_list(rnd, rnd.randint(2, 12))
        protected = tuple(item for item in rec.items if rnd.random() < 0.3)
        others = tuple(item for item in rec.items if item not in protected)
        result = rescore(rec, Allocation.single("a1"), {"a1": BinaryPreference(protected, others)}, config)
        for item in protected:
            assert result.items.index(item) <= rec.items.index(item)


def test_rescore_unprotected_never_overtakes_protected():
    rnd = random.Random(23)
    for _ in range(300):
        rec = random_rec_list(rnd, rnd.randint(2, 12))
        first = tuple(item for item in rec.items if rnd.random() < 0.3)
        second = tuple(item for item in rec.items if rnd.random() < 0.3)
        preferences = {
            "a1": BinaryPreference(first, tuple(item for item in rec.items if item not in first)),
            "a2": BinaryPreference(second, tuple(item for item in rec.items if item not in second)),
        }
        result = rescore(rec, Allocation("weighted", {"a1": 0.4, "a2": 0.6}), preferences, ChoiceConfig(rule="rescore"))
        favored = set(first) | set(second)
        for item in favored:
            for other in rec.items[rec.items.index(item) + 1:]:
                if other not in favored:
                    assert result.items.index(item) < result.items.index(other)


def timing_profile(m, agents=3, seed=0):
    rnd = random.Random(seed)
    candidates = [f"i{index}" for index in range(m)]
    ballots = [(list(candidates), 0.6)]
    for _ in range(agents):
        ranking = list(candidates)
        rnd.shuffle(ranking)
        ballots.append((ranking, 0.4 / agents))
    return profile(candidates, *ballots)


def fastest(aggregate, built, repeats=15):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        aggregate(built)
        best = min(best, time.perf_counter() - start)
    return best


@mark.slow
@mark.parametrize("aggregate, slope", [(copeland_aggregate, 2.0), (borda_aggregate, 1.0)])
def test_aggregate_cost_growth(aggregate, slope):
    sizes = [10, 50, 100, 200]
    seconds = [fastest(aggregate, timing_profile(m)) for m in sizes]
    fitted = np.polyfit(np.log(sizes), np.log(seconds), 1)[0]
    assert fitted == approx(slope, abs=0.4)
