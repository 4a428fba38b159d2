import os

import numpy as np

from . import _render_numpy
from .camera import CameraExtrinsics, CameraIntrinsics
from .primitives import pack_primitives

try:
    from . import _render_core  # compiled raycast kernel

    HAVE_COMPILED = True
except ImportError:  # pragma: no cover - depends on build environment
    _render_core = None
    HAVE_COMPILED = False


def active_backend() -> str:
    forced = os.environ.get("TWINDESK_RENDER_BACKEND", "").strip().lower()
    if forced == "numpy":
        return "numpy"
    if forced == "compiled":
        if not HAVE_COMPILED:
            raise RuntimeError("compiled render backend requested but not built")
        return "compiled"
    return "compiled" if HAVE_COMPILED else "numpy"


def render_arrays_backend(name: str | None = None):
    name = name or active_backend()
    if name == "compiled":
        if not HAVE_COMPILED:
            raise RuntimeError("compiled render backend not built")
        return _render_core.render_arrays
    if name == "numpy":
        return _render_numpy.render_arrays
    raise ValueError(f"unknown render backend {name!r}")


def _camera_constants(packed: dict, origin: np.ndarray) -> dict:
    """Ray-independent per-primitive terms, shared verbatim by both backends."""
    nb = len(packed["box_centers"])
    box_p = np.zeros((nb, 3))
    for i in range(nb):
        box_p[i] = packed["box_rots"][i].T @ (origin - packed["box_centers"][i])
    nc = len(packed["cap_ab"])
    cap_m = origin[None, :] - packed["cap_a"]
    cap_md = np.zeros(nc)
    cap_cyl_c = np.zeros(nc)
    cap_sph_a_c = np.zeros(nc)
    cap_sph_b_c = np.zeros(nc)
    for i in range(nc):
        m = cap_m[i]
        ab = packed["cap_ab"][i]
        r2 = packed["cap_radius"][i] ** 2
        mm = m @ m
        md = m @ ab
        cap_md[i] = md
        cap_cyl_c[i] = mm - md * md / packed["cap_len2"][i] - r2
        cap_sph_a_c[i] = mm - r2
        m2 = m - ab
        cap_sph_b_c[i] = m2 @ m2 - r2
    return {
        "box_p": box_p,
        "cap_m": cap_m,
        "cap_md": cap_md,
        "cap_cyl_c": cap_cyl_c,
        "cap_sph_a_c": cap_sph_a_c,
        "cap_sph_b_c": cap_sph_b_c,
    }


def render(
    prims,
    intrinsics: CameraIntrinsics,
    extrinsics: CameraExtrinsics,
    backend: str | None = None,
):
    """Raycast the primitive list into a (depth u16 mm, rgb u8) frame pair."""
    packed = pack_primitives(prims)
    origin = extrinsics.translation
    consts = _camera_constants(packed, origin)
    fn = render_arrays_backend(backend)
    return fn(
        intrinsics.width,
        intrinsics.height,
        intrinsics.fx,
        intrinsics.fy,
        intrinsics.cx,
        intrinsics.cy,
        np.ascontiguousarray(origin),
        np.ascontiguousarray(extrinsics.rotation()),
        np.ascontiguousarray(packed["rect_params"]),
        np.ascontiguousarray(packed["rect_colors"]),
        np.ascontiguousarray(packed["box_centers"]),
        np.ascontiguousarray(packed["box_rots"]),
        np.ascontiguousarray(packed["box_halfs"]),
        np.ascontiguousarray(packed["box_colors"]),
        np.ascontiguousarray(consts["box_p"]),
        np.ascontiguousarray(packed["cap_ab"]),
        np.ascontiguousarray(packed["cap_len2"]),
        np.ascontiguousarray(packed["cap_radius"]),
        np.ascontiguousarray(packed["cap_colors"]),
        np.ascontiguousarray(consts["cap_m"]),
        np.ascontiguousarray(consts["cap_md"]),
        np.ascontiguousarray(consts["cap_cyl_c"]),
        np.ascontiguousarray(consts["cap_sph_a_c"]),
        np.ascontiguousarray(consts["cap_sph_b_c"]),
    )
