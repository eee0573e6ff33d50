"""Cayley graphs of automorphism groups using NetworkX."""

from typing import Dict, Hashable, List, Sequence
import networkx as nx
from loguru import logger
from .errors import InternalInconsistency


class GroupBuilder:
    """
    Build a finite group of field automorphisms as a Cayley graph.

    Nodes are keyed by the image of the primitive element; an edge g -> h labelled i
    means h = generators[i] o g.
    """

    def __init__(self):
        """Initialize the group builder."""
        self.graph = nx.DiGraph()
        self.generators: List = []
        self._elements: Dict[Hashable, object] = {}

    def add_element(self, automorphism) -> Hashable:
        """
        Add an automorphism node to the graph.

        Args:
            automorphism: Automorphism to add

        Returns:
            Node key
        """
        key = automorphism.key
        if key not in self._elements:
            self._elements[key] = automorphism
            self.graph.add_node(key, identity=automorphism.is_identity(), order=None)
        return key

    def build_from_generators(self, generators: Sequence, identity) -> "GroupBuilder":
        """
        Close a generator set under composition by breadth-first search.

        Args:
            generators: Automorphisms generating the group
            identity: The identity automorphism of the same field

        Returns:
            self
        """
        self.generators = list(generators)
        frontier = [identity]
        self.add_element(identity)
        while frontier:
            nxt = []
            for element in frontier:
                for label, gen in enumerate(self.generators):
                    product = gen.compose(element)
                    is_new = product.key not in self._elements
                    self.add_element(product)
                    self.graph.add_edge(element.key, product.key, generator=label)
                    if is_new:
                        nxt.append(product)
            frontier = nxt
        for key, element in self._elements.items():
            self.graph.nodes[key]["order"] = element.order()
        logger.debug(f"Built group of order {self.order} from {len(self.generators)} generators")
        return self

    @property
    def order(self) -> int:
        return self.graph.number_of_nodes()

    def elements(self) -> List:
        return [self._elements[key] for key in sorted(self._elements, key=repr)]

    def identity_present(self) -> bool:
        return any(data["identity"] for _, data in self.graph.nodes(data=True))

    def verify_closure(self) -> bool:
        """Every element has one outgoing edge per generator and an inverse inside the group."""
        labels_ok = all(
            {data["generator"] for _, _, data in self.graph.out_edges(node, data=True)}
            == set(range(len(self.generators)))
            for node in self.graph.nodes()
        )
        inverses_ok = all(
            any(a.compose(b).is_identity() for b in self._elements.values())
            for a in self._elements.values()
        )
        if not (labels_ok and inverses_ok):
            raise InternalInconsistency("Automorphism set is not closed under composition and inverses")
        return True

    def is_cyclic(self) -> bool:
        return any(order == self.order for _, order in self.graph.nodes(data="order"))

    def is_strongly_connected(self) -> bool:
        return self.order <= 1 or nx.is_strongly_connected(self.graph)

    def export_to_dict(self) -> Dict:
        """
        Export the Cayley graph to dictionary format.

        Returns:
            Dictionary representation of the graph
        """
        return {
            "nodes": [
                {"id": [str(c) for c in node], **self.graph.nodes[node]}
                for node in self.graph.nodes()
            ],
            "edges": [
                {"source": [str(c) for c in u], "target": [str(c) for c in v], **data}
                for u, v, data in self.graph.edges(data=True)
            ],
        }

    def get_statistics(self) -> Dict:
        return {
            "order": self.order,
            "generators": len(self.generators),
            "edges": self.graph.number_of_edges(),
            "cyclic": self.is_cyclic(),
            "strongly_connected": self.is_strongly_connected(),
        }
