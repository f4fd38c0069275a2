from hypothesis import strategies as st

from homology.linalg import FieldSpec

CHARACTERISTICS = (0, 2, 3, 5, 7)


def fields():
    return st.sampled_from(CHARACTERISTICS).map(FieldSpec)


@st.composite
def matrices(draw, max_rows=5, max_cols=5, field=None):
    field = field if field is not None else draw(fields())
    rows = draw(st.integers(min_value=1, max_value=max_rows))
    cols = draw(st.integers(min_value=1, max_value=max_cols))
    entries = draw(st.lists(st.lists(st.integers(min_value=-3, max_value=3),
                                     min_size=cols, max_size=cols),
                            min_size=rows, max_size=rows))
    return field, field.array(entries)
