import pytest

from sessionrec.model import ClassId, GraphBuilder, KernelClass, KernelId, ObjectId

# Small reference graph used by the golden tests.  Kernels 1, 2 and 4 carry
# class 1, kernel 3 carries class 2:
#   j1 -> {o1, o2}   j2 -> {o1, o3}   j3 -> {o2, o3, o4}   j4 -> {o5}
F1_ARCS = [
    (1, 1, 1),
    (1, 2, 1),
    (2, 1, 1),
    (2, 3, 1),
    (3, 2, 2),
    (3, 3, 2),
    (3, 4, 2),
    (4, 5, 1),
]


def f1_classes(class2_weight: int = 1) -> list[KernelClass]:
    return [
        KernelClass(id=ClassId(1), name="orders", kind="behavioural", weight=1),
        KernelClass(id=ClassId(2), name="categories", kind="static", weight=class2_weight),
    ]


def build_f1(class2_weight: int = 1):
    builder = GraphBuilder(classes=f1_classes(class2_weight))
    for kernel, obj, class_id in F1_ARCS:
        builder.add_arc(KernelId(kernel), ObjectId(obj), ClassId(class_id))
    return builder.freeze()


@pytest.fixture(scope="session")
def f1():
    return build_f1()


@pytest.fixture(scope="session")
def f1_weighted():
    """F1 with class weights {1: 1, 2: 3}."""
    return build_f1(class2_weight=3)
