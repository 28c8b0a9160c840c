#!/usr/bin/env python3
"""
Demo script for wpduality
This script walks through measures, relation records and a small ensemble run
"""

import math
import sys
from pathlib import Path

# Add src to path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from wpduality.duality import entanglement_entropy, generalized_concurrence, measure_set
from wpduality.ensemble import EnsembleConfig, EnsembleVerifier
from wpduality.exceptions import InapplicableRelationError
from wpduality.profile import Cut, DimensionProfile
from wpduality.relations import RelationContext, evaluate_relation
from wpduality.reports import to_csv
from wpduality.states import ginibre_mixed, named_pure


def demo_measures():
    """Demonstrate single-state and bipartite measures."""
    print("🔍 Measures of reference states...")

    ghz = named_pure("ghz")
    cut = Cut.parse("A|BC", ghz.profile)
    print(f"✅ GHZ across A|BC: E = {entanglement_entropy(ghz, cut):.6f} bits, "
          f"C = {generalized_concurrence(ghz, cut):.6f}")

    marginal = ghz.reduced([0, 1])
    ms = measure_set(marginal)
    print(f"✅ GHZ marginal AB: S^2 = {ms.info_S ** 2:.6f}, I = {ms.info_I:.6f}, purity = {ms.purity:.6f}")

    rho = ginibre_mixed(3, None, 2024)
    ms = measure_set(rho)
    print(f"✅ Ginibre qutrit: P = {ms.predictability:.6f}, V = {ms.visibility:.6f}, S = {ms.info_S:.6f}")


def demo_relations():
    """Demonstrate individual relation records."""
    print("\n⚖️  Relation records...")

    bell = named_pure("bell")
    record = evaluate_relation("R12", RelationContext.of(bell))
    print(f"✅ R12 on Bell: lhs = {record.lhs_value:.6f}, rhs = {record.rhs_value:.6f}, saturated = {record.saturated}")

    product = named_pure("basis(0)", DimensionProfile((2, 2)))
    record = evaluate_relation("R12-literal", RelationContext.of(product))
    print(f"⚠️  R12-literal on |00>: margin = {record.margin:.6f} "
          f"(ln 2 - 1/(2 ln 2) = {math.log(2) - 1 / (2 * math.log(2)):.6f})")

    try:
        evaluate_relation("R2", RelationContext.of(ginibre_mixed(None, None, 1, DimensionProfile((2, 2)))))
    except InapplicableRelationError as e:
        print(f"✅ R2 on a mixed state is inapplicable: {e.reason}")


def demo_ensemble():
    """Demonstrate an ensemble run and its CSV summary."""
    print("\n🎲 Ensemble verification...")

    config = EnsembleConfig(relations="R12,R15,R19", dims="2x2", samples=500, seed=42)
    reports = EnsembleVerifier().run(config)
    for report in reports:
        print(f"   {report.relation_id}: {report.status}, {report.violations} violations, "
              f"min margin {report.min_margin:.3e}")
    print(to_csv(reports))


def main():
    """Run all demo functions."""
    print("🌊 wpduality - Demo Mode")
    print("=" * 60)

    try:
        demo_measures()
        demo_relations()
        demo_ensemble()

        print("=" * 60)
        print("✅ All Demos Completed Successfully!")
        print("\nTo use the command line:")
        print("1. Install: pip install -e .")
        print("2. List relations: wpduality list")
        print("3. Verify: wpduality verify --relations R19 --dims 2x2 --samples 100000")

    except Exception as e:
        print(f"\n❌ Demo failed with error: {e}")
        sys.exit(1)


if __name__ == "__main__":
    main()
