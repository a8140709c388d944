"""Problem data: instances, tours, dynamic events and their file formats."""

from .instance import (
    City,
    Instance,
    Tour,
    tour_length,
    make_tour,
    generate_random_instance,
    nearest_neighbor_tour,
)
from .events import DynamicEvent, EventSchedule, apply_event
from .loader import load_instance, load_event_schedule, save_instance

__all__ = [
    "City", "Instance", "Tour", "tour_length", "make_tour",
    "generate_random_instance", "nearest_neighbor_tour",
    "DynamicEvent", "EventSchedule", "apply_event",
    "load_instance", "load_event_schedule", "save_instance",
]
