from .frames import Envelope, FrameError, encode_frame, decode_frame
from .core import Bus, BusClosedError, Subscription, SubscriptionMode
from . import schemas

__all__ = [
    "Envelope",
    "FrameError",
    "encode_frame",
    "decode_frame",
    "Bus",
    "BusClosedError",
    "Subscription",
    "SubscriptionMode",
    "schemas",
]
