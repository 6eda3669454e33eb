"""Context identifiers for episodes via a reversed-sequence prefix tree.

Medium/high-severity episodes define (micro, service) tokens. Each
sequence's token list is inserted into the tree back-to-front, so a tree
node stands for "sequences that end with these actions". Frequent nodes
(count >= merge_min_count) receive their own positive id; rare nodes share
their parent's id, which merges insignificant path variants. Id 0 is
reserved for "unspecified" (the tree root and the artificial graph root).

When annotating, a sequence's reversed token list is replayed from the
root and the i-th episode with a token takes the state after i replay
steps: early actions carry coarse, objective-level context while the final
action's id encodes the whole route, so significantly different ways of
reaching the same objective end in distinct ids. Low-severity episodes
inherit the id of the nearest preceding tokened episode (0 when none), and
any token missing from the tree yields id 0 rather than an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .episodes import Episode, EpisodeSequence
from .stages import SeverityLevel

DEFAULT_MERGE_MIN_COUNT = 5

Token = tuple[str, str]  # (micro value, service)


def _is_tokened(episode: Episode) -> bool:
    return episode.severity in (SeverityLevel.MEDIUM, SeverityLevel.HIGH)


def sequence_tokens(sequence: EpisodeSequence) -> list[Token]:
    return [
        (e.micro.value, e.service) for e in sequence.episodes if _is_tokened(e)
    ]


@dataclass
class TreeNode:
    count: int = 0
    context_id: int = 0
    children: dict[Token, "TreeNode"] = field(default_factory=dict)


@dataclass
class SuffixModel:
    root: TreeNode
    merge_min_count: int

    def walk(self, reversed_tokens: list[Token]) -> Iterator[Optional[TreeNode]]:
        """Nodes visited while consuming tokens; None once a token is unknown."""
        node: Optional[TreeNode] = self.root
        for token in reversed_tokens:
            node = node.children.get(token) if node is not None else None
            yield node

    def node_count(self) -> int:
        total = 0
        stack = [self.root]
        while stack:
            node = stack.pop()
            total += 1
            stack.extend(node.children.values())
        return total


def build_suffix_model(
    sequences: list[EpisodeSequence],
    merge_min_count: int = DEFAULT_MERGE_MIN_COUNT,
) -> SuffixModel:
    """Count reversed token paths and assign stable context ids."""
    if merge_min_count < 1:
        raise ValueError("merge_min_count must be >= 1")

    root = TreeNode()
    for sequence in sequences:
        tokens = sequence_tokens(sequence)
        root.count += 1
        node = root
        for token in reversed(tokens):
            node = node.children.setdefault(token, TreeNode())
            node.count += 1

    # Depth-first with sorted children keeps ids identical across runs.
    next_id = 1
    stack: list[TreeNode] = [root]
    while stack:
        node = stack.pop()
        for token in sorted(node.children, reverse=True):
            child = node.children[token]
            if child.count >= merge_min_count:
                child.context_id = next_id
                next_id += 1
            else:
                child.context_id = node.context_id
            stack.append(child)
    return SuffixModel(root=root, merge_min_count=merge_min_count)


def assign_context_ids(
    sequences: list[EpisodeSequence],
    model: SuffixModel,
) -> list[EpisodeSequence]:
    """Annotate every episode with a context id (in place; returns input)."""
    for sequence in sequences:
        tokens = sequence_tokens(sequence)
        states: list[Optional[TreeNode]] = [model.root]
        states.extend(model.walk(list(reversed(tokens))))

        seen = 0
        for episode in sequence.episodes:
            if _is_tokened(episode):
                seen += 1
            state = states[seen]
            episode.context_id = state.context_id if state is not None else 0
    return sequences
