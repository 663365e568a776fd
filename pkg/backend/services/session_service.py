import json
import logging
import threading
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from pydantic import ValidationError

from config import settings
from models.correspondence import CompositeCorrespondence, Correspondence, MiddleDiagram
from models.presentation import Presentation
from models.session import CompositionRequest, CorrespondenceSpec, SessionFile, SideSpec
from models.table import CompositionTable, LabelInfo
from services.coloring_service import check_coloring, is_conjugate
from services.composition_service import (
    UNKNOT,
    compose,
    cyclic_cover,
    make_correspondence,
    make_side,
    transpose,
    unit,
)
from services.convolution import validate_table
from services.exceptions import CompositionError, CorrCalcError, CorrespondenceError, InputError, PresentationError
from services.wirtinger import presentation_from_json

logger = logging.getLogger(__name__)


class Session:
    """Label registry for one run: presentations, correspondences and computed composites.

    Registration is single-writer under a lock; composition itself is pure and
    may run on worker threads.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self.presentations: Dict[str, Presentation] = {'O': UNKNOT}
        self.correspondences: Dict[str, Correspondence] = {}
        self.composites: Dict[str, CompositeCorrespondence] = {}
        self.entries: Dict[str, List[str]] = {}
        self.failures: Dict[str, str] = {}

    # -- registry -----------------------------------------------------------

    def presentation(self, ref: str) -> Presentation:
        if ref not in self.presentations:
            raise PresentationError(f"Unknown presentation '{ref}'", ref=ref)
        return self.presentations[ref]

    def correspondence(self, label: str) -> Correspondence:
        if label not in self.correspondences:
            raise CorrespondenceError(f"Unknown correspondence '{label}'", label=label)
        return self.correspondences[label]

    def register(self, c: Correspondence) -> str:
        with self._lock:
            existing = self.correspondences.get(c.label)
            if existing is not None:
                if not existing.same_as(c):
                    raise CorrespondenceError(f"Label '{c.label}' is already taken", label=c.label)
                return c.label
            self.correspondences[c.label] = c
        logger.debug(f"Registered {c!r}")
        return c.label

    def find_same(self, c: Correspondence) -> Optional[str]:
        for label, other in self.correspondences.items():
            if other.same_as(c):
                return label
        return None

    def rename(self, old: str, new: str) -> None:
        with self._lock:
            if new in self.correspondences:
                raise CorrespondenceError(f"Label '{new}' is already taken", label=new)
            c = self.correspondences.pop(old, None)
            if c is None:
                raise CorrespondenceError(f"Unknown correspondence '{old}'", label=old)
            self.correspondences[new] = c.model_copy(update={'label': new})
            renamed = {}
            for key, labels in self.entries.items():
                a, b = CompositionTable.split_key(key)
                a, b = (new if a == old else a), (new if b == old else b)
                renamed[CompositionTable.key(a, b)] = [new if l == old else l for l in labels]
            self.entries = renamed

    # -- building from files ------------------------------------------------

    def _side(self, spec: SideSpec):
        presentation = self.presentation(spec.presentation)
        rep = check_coloring(presentation, spec.coloring, spec.degree)
        return make_side(rep, marked=spec.marked, branch_locus=spec.locus or presentation.label or spec.presentation)

    def add_spec(self, label: str, spec: CorrespondenceSpec) -> str:
        left = self._side(spec.left)
        right = self._side(spec.right) if spec.right is not None else left
        return self.register(make_correspondence(left, right, label, spec.source, spec.target))

    def composable(self, a: str, b: str) -> bool:
        return self.correspondence(a).target_graph == self.correspondence(b).source_graph

    # -- composition --------------------------------------------------------

    def _middle(self, request: CompositionRequest) -> Optional[MiddleDiagram]:
        if request.middle is None:
            return None
        try:
            return MiddleDiagram(
                presentation=self.presentation(request.middle),
                side1=request.side1,
                side2=request.side2,
            )
        except ValidationError as exc:
            raise CompositionError(f"Invalid middle diagram: {exc.errors()[0]['msg']}") from exc

    def compute(self, request: CompositionRequest) -> CompositeCorrespondence:
        """Pure part of a composition: nothing is registered."""
        c1, c2 = self.correspondence(request.left), self.correspondence(request.right)
        extensions = [
            ext.model_dump(exclude_none=True) if ext is not None else None
            for ext in (request.left_extension, request.right_extension)
        ]
        return compose(c1, c2, self._middle(request), *extensions)

    def record(self, composite: CompositeCorrespondence) -> List[str]:
        """Register the lifted components of a composite and its table entry."""
        key = CompositionTable.key(composite.left_label, composite.right_label)
        self.composites[key] = composite
        unlifted = [c.label for c in composite.components if not c.lifted]
        if unlifted:
            self.failures[key] = f"components {', '.join(unlifted)} cannot be lifted to correspondences"
            logger.warning(f"{key}: {self.failures[key]}")
            return []
        labels = []
        single = len(composite.components) == 1
        for component in composite.components:
            existing = self.find_same(component.correspondence) if single else None
            labels.append(existing or self.register(component.correspondence))
        self.entries[key] = labels
        return labels

    def compose_request(self, request: CompositionRequest) -> CompositeCorrespondence:
        composite = self.compute(request)
        self.record(composite)
        return composite

    def compose_pairs(self, pairs: List[Tuple[str, str]]) -> Dict[str, CompositeCorrespondence]:
        """Compose many pairs on worker threads; failures are kept per pair."""
        results: Dict[str, CompositeCorrespondence] = {}
        with ThreadPoolExecutor(max_workers=settings.search_workers) as executor:
            future_to_key = {
                executor.submit(self.compute, CompositionRequest(left=a, right=b)): CompositionTable.key(a, b)
                for a, b in pairs
            }
            for future in as_completed(future_to_key):
                key = future_to_key[future]
                try:
                    results[key] = future.result()
                except CorrCalcError as e:
                    self.failures[key] = e.detail
                    logger.warning(f"Composition {key} failed: {e.detail}")
        # registration order must not depend on thread scheduling
        for key in sorted(results):
            self.record(results[key])
        return results

    def all_pairs(self) -> List[Tuple[str, str]]:
        labels = sorted(self.correspondences)
        return [(a, b) for a in labels for b in labels
                if self.composable(a, b) and CompositionTable.key(a, b) not in self.composites]


def session_from_data(data: Union[Dict, SessionFile]) -> Session:
    spec = data if isinstance(data, SessionFile) else SessionFile.model_validate(data)
    session = Session()
    for ref, raw in spec.presentations.items():
        session.presentations[ref] = presentation_from_json({'label': ref, **raw})
    for graph in spec.units:
        session.register(unit(graph))
    for n in spec.cyclic_covers:
        session.register(cyclic_cover(n))
    for label, c in spec.correspondences.items():
        session.add_spec(label, c)
    for request in spec.requests:
        session.compose_request(request)
    logger.info(f"Loaded session: {len(session.correspondences)} correspondences, {len(session.entries)} entries")
    return session


def load_session(path: Union[str, Path]) -> Session:
    try:
        with open(path, encoding='utf-8') as f:
            data = json.load(f)
    except OSError as exc:
        raise InputError(f"Cannot read session {path}: {exc.strerror}", path=str(path)) from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"Session {path} is not valid JSON: {exc.msg} (line {exc.lineno})", path=str(path)) from exc
    return session_from_data(data)


def _transpose_label(c: Correspondence, known: Dict[str, Correspondence]) -> str:
    t = transpose(c)
    known.setdefault(t.label, t)
    return t.label


def _same_up_to_sheets(c1: Correspondence, c2: Correspondence) -> bool:
    return all(
        getattr(c1, name).presentation == getattr(c2, name).presentation
        and getattr(c1, name).branch_locus == getattr(c2, name).branch_locus
        and is_conjugate(getattr(c1, name).rep, getattr(c2, name).rep)
        for name in ('left', 'right')
    ) and (c1.source_graph, c1.target_graph) == (c2.source_graph, c2.target_graph)


def conjugate_labels(known: Dict[str, Correspondence]) -> Dict[str, List[str]]:
    """Labels that differ from a shorter label only by renumbering sheets.

    They stay distinct table labels; identifying them is left to a declared
    quotient. Keyed by the shortest label of each group.
    """
    groups: Dict[str, List[str]] = {}
    for label in sorted(known, key=lambda l: (len(l), l)):
        c = known[label]
        for head in groups:
            other = known[head]
            if (other.n, other.m) == (c.n, c.m) and _same_up_to_sheets(other, c):
                groups[head].append(label)
                break
        else:
            groups[label] = []
    return {head: members for head, members in groups.items() if members}


def emit_table(session: Session) -> Dict:
    """Composition table of the session, with transposed entries and open pairs."""
    known = dict(session.correspondences)
    transposes = {label: _transpose_label(c, known) for label, c in list(known.items())}

    labels = {
        label: LabelInfo(n=c.n, m=c.m, source=c.source_graph, target=c.target_graph,
                         transpose=transposes.get(label) or transpose(c).label)
        for label, c in known.items()
    }

    entries = dict(session.entries)
    for key, components in sorted(session.entries.items()):
        a, b = CompositionTable.split_key(key)
        mirrored = CompositionTable.key(labels[b].transpose, labels[a].transpose)
        if mirrored in entries:
            continue
        entries[mirrored] = [labels[c].transpose for c in components]

    multi = {
        composite.label: list(entries[key])
        for key, composite in session.composites.items()
        if key in entries and len(entries[key]) > 1
    }
    table = validate_table(CompositionTable(labels=labels, entries=entries, multi=multi))
    open_pairs = [
        CompositionTable.key(a, b)
        for a in sorted(labels) for b in sorted(labels)
        if labels[a].target == labels[b].source and CompositionTable.key(a, b) not in entries
    ]
    conjugates = conjugate_labels(known)
    if conjugates:
        logger.info(f"{sum(map(len, conjugates.values()))} labels only renumber the sheets of another label")
    logger.info(f"Emitted table with {len(labels)} labels, {len(entries)} entries, {len(open_pairs)} open pairs")
    return {
        'table': table,
        'open_pairs': open_pairs,
        'conjugates': conjugates,
        'failures': dict(sorted(session.failures.items())),
    }
