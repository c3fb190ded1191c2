import hashlib


def _hash_to_u64(text: str) -> int:
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big", signed=False)


def derive_seed(base_seed: int, *parts) -> int:
    """
    Derive a stable child seed from a base seed and a path of labels,
    e.g. ``derive_seed(seed, "fold", 2, "cell", 4, "lottery")``.
    """
    label = ":".join(str(part) for part in parts)
    return _hash_to_u64(f"{base_seed}:{label}")


def stable_bucket(*parts, buckets: int) -> int:
    """Hash the labels into one of ``buckets`` buckets, independent of PYTHONHASHSEED."""
    if buckets < 1:
        raise ValueError("buckets must be positive")
    return _hash_to_u64(":".join(str(part) for part in parts)) % buckets


def stable_fraction(*parts) -> float:
    """Hash the labels to a float in [0, 1)."""
    return _hash_to_u64(":".join(str(part) for part in parts)) / float(1 << 64)
