"""Worked examples shipped as JSON under fixtureData/, checked on load."""
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from src.core.errors import FixtureError, IndexCodingError
from src.core.export_formatter import IndexCodingExportFormatter
from src.core.graph import SuicpInstance, mask_of
from src.core.ic_structure import InnerVertexSet, as_decomposition, encode_ic, verify_ic
from src.core.index_code import DecodingPlan, LinearCode, encode_oic, make_decoding_plan
from src.core.oic_structure import PolytreeDecomposition, derive_sets, verify_oic

logger = logging.getLogger(__name__)

current_dir = os.path.dirname(os.path.abspath(__file__))
DATA_PATH = os.path.join(current_dir, "../../fixtureData/")


@dataclass
class Fixture:
    name: str
    title: str
    kind: str
    instance: SuicpInstance
    decomposition: PolytreeDecomposition
    expected: Dict[str, Any]
    sha256: str
    inner_set: Optional[InnerVertexSet] = None
    branches: List[Dict[str, Any]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    code: Optional[LinearCode] = None
    plan: Optional[DecodingPlan] = None

    @property
    def expected_length(self) -> int:
        return self.expected["length"]

    @property
    def published_capacity(self) -> Optional[Fraction]:
        published = self.expected.get("published_capacity")
        return None if published is None else Fraction(published["num"], published["den"])

    @property
    def formula_capacity(self) -> Fraction:
        derived = derive_sets(self.instance.graph, self.decomposition)
        return Fraction(1, len(derived.V_NI) + self.decomposition.s)

    @property
    def capacity_discrepancy(self) -> Optional[str]:
        published = self.published_capacity
        if published is None or published == self.formula_capacity:
            return None
        return f"published value {published}, the structure gives {self.formula_capacity}"

    def expected_tau(self, k: int) -> int:
        for row in self.expected["plan"]:
            if row["receiver"] == k:
                return mask_of(row["tau"])
        raise KeyError(k)


def _self_check(fixture: Fixture) -> None:
    """Structure verifies, and code, plan and length match the stored expectations."""
    g = fixture.instance.graph
    if fixture.inner_set is not None:
        ic_report = verify_ic(g, fixture.inner_set)
        if not ic_report.passed:
            raise FixtureError(f"fixture {fixture.name}: IC check failed {ic_report.failed_conditions}")
    report = verify_oic(g, fixture.decomposition)
    if not report.passed:
        raise FixtureError(f"fixture {fixture.name}: OIC check failed {report.failed_conditions}")

    code = encode_oic(g, fixture.decomposition)
    if fixture.inner_set is not None and code != encode_ic(g, fixture.inner_set):
        raise FixtureError(f"fixture {fixture.name}: single-node code differs from the IC code")
    stored = [(s["label"], int(s["mask_hex"], 16)) for s in fixture.expected["code"]]
    built = [(s.label, s.mask) for s in code.symbols]
    if built != stored:
        raise FixtureError(f"fixture {fixture.name}: code {built} differs from stored {stored}")
    if code.length != fixture.expected_length:
        raise FixtureError(f"fixture {fixture.name}: length {code.length}, expected {fixture.expected_length}")

    plan = make_decoding_plan(g, fixture.decomposition, code=code)
    for row in fixture.expected["plan"]:
        receiver = plan.receiver(row["receiver"])
        if list(receiver.gamma) != row["gamma"] or receiver.tau_mask != mask_of(row["tau"]):
            raise FixtureError(f"fixture {fixture.name}: receiver {row['receiver']} decodes with "
                               f"{list(receiver.gamma)}, expected {row['gamma']}")
    fixture.code, fixture.plan = code, plan

    if fixture.capacity_discrepancy:
        logger.info(f"Fixture {fixture.name}: {fixture.capacity_discrepancy}")


def _parse(data: Dict[str, Any], source: str) -> Fixture:
    formatter = IndexCodingExportFormatter()
    instance = formatter.parse_instance(data["graph"], source)
    digest = formatter.graph_sha256(instance)
    if digest != data["sha256"]:
        raise FixtureError(f"fixture {data['name']}: graph hash {digest} does not match the stored hash")

    inner_set = None
    if data["kind"] == "ic":
        inner_set = formatter.parse_inner_set(data["inner_set"], source)
        decomposition = as_decomposition(inner_set)
    else:
        decomposition = formatter.parse_decomposition(data["decomposition"], source)
    return Fixture(data["name"], data.get("title", ""), data["kind"], instance, decomposition,
                   data["expected"], digest, inner_set, data.get("branches", []), data.get("notes", []))


def load_fixture(name: str) -> Fixture:
    """Load and self-check one fixture by name."""
    path = os.path.join(DATA_PATH, f"{name}.json")
    try:
        data = IndexCodingExportFormatter().load_json(path)
        fixture = _parse(data, path)
        _self_check(fixture)
    except FixtureError as e:
        logger.error(f"Fixture {name} rejected: {str(e)}")
        raise
    except (IndexCodingError, KeyError, TypeError) as e:
        logger.error(f"Fixture {name} could not be loaded: {str(e)}")
        raise FixtureError(f"fixture {name}: {e}")
    logger.info(f"Loaded fixture {name}: K={fixture.instance.K}, length {fixture.code.length}")
    return fixture


def fixture_names() -> List[str]:
    return sorted(f[:-len(".json")] for f in os.listdir(DATA_PATH) if f.endswith(".json"))


def load_fixtures() -> List[Fixture]:
    return [load_fixture(name) for name in fixture_names()]
