from contextvars import ContextVar, Token

#: Largest lattice (in sites) any builder will allocate.
DEFAULT_MAX_SITES = 4_000_000
#: Budget for exact enumeration, in bits of state: N*log2(q) + E.
DEFAULT_ORACLE_BITS = 26
#: Above this many site pairs the slab probe samples pairs instead of exhausting them.
DEFAULT_MAX_PAIRS = 1_000_000
#: Annealer moves between two full-recompute audits of the incremental energy.
DEFAULT_AUDIT_EVERY = 10_000


class LabContext:
    """Container for the lab's process-wide runtime limits."""

    __slots__ = ("audit_every", "max_pairs", "max_sites", "oracle_bits", "workers")

    audit_every: int
    max_pairs: int
    max_sites: int
    oracle_bits: float
    workers: int

    def __init__(self) -> None:
        self.audit_every = DEFAULT_AUDIT_EVERY
        self.max_pairs = DEFAULT_MAX_PAIRS
        self.max_sites = DEFAULT_MAX_SITES
        self.oracle_bits = DEFAULT_ORACLE_BITS
        self.workers = 1

    def __enter__(self) -> "LabContext":
        token = _lab_context_ctx.set(self)
        _lab_context_token_stack.set(_lab_context_token_stack.get() + (token,))
        return self

    def __exit__(self, *exc_info: object) -> None:
        token_stack = _lab_context_token_stack.get()
        if not token_stack:
            raise RuntimeError("LabContext was exited without being entered.")
        token = token_stack[-1]
        _lab_context_token_stack.set(token_stack[:-1])
        _lab_context_ctx.reset(token)


_default_context = LabContext()
_lab_context_ctx: ContextVar[LabContext | None] = ContextVar(
    "pottslab_context", default=None
)
_lab_context_token_stack: ContextVar[tuple[Token[LabContext | None], ...]] = (
    ContextVar("pottslab_context_token_stack", default=())
)


def _get_lab_context() -> LabContext:
    return _lab_context_ctx.get() or _default_context


class _LabGlobalsProxy:
    def __getattr__(self, name: str):
        return getattr(_get_lab_context(), name)

    def __setattr__(self, name: str, value):
        setattr(_get_lab_context(), name, value)


lab_globals = _LabGlobalsProxy()


def configure(
    *,
    max_sites: int | None = None,
    oracle_bits: float | None = None,
    max_pairs: int | None = None,
    workers: int | None = None,
    audit_every: int | None = None,
) -> None:
    """Configure pottslab's runtime limits. Call once at startup.

    ``max_sites`` bounds every lattice builder (``build_box``, ``build_slab``);
    a request above it raises :class:`~pottslab.exc.SizingError` before any
    array is allocated. ``oracle_bits`` bounds exact enumeration, measured as
    ``N*log2(q) + E`` for N free sites and E edges. ``max_pairs`` is the point
    at which the slab long-range-order probe switches from exhaustive pairs to
    a seeded pair sample. ``workers`` sizes the process pool used for
    independent replicas (1 runs them serially in-process); results are merged
    in replica order, so the value never changes any output. ``audit_every``
    is the number of annealer moves between two full energy recomputations.

    The settings apply to the active :class:`LabContext`; enter a fresh
    context (``with LabContext(): ...``) for a scoped override.
    """
    values = {
        "max_sites": max_sites,
        "oracle_bits": oracle_bits,
        "max_pairs": max_pairs,
        "workers": workers,
        "audit_every": audit_every,
    }
    if all(value is None for value in values.values()):
        raise TypeError("pottslab.configure() requires at least one setting.")
    for name, value in values.items():
        if value is None:
            continue
        if value <= 0:
            raise ValueError(f"{name} must be positive, got {value!r}")
        setattr(lab_globals, name, value)
