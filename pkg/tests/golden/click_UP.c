state click_UP(state* st) {
    assert(st->curr_node == on);
    assert(st->display < 10 || st->display == 10);
    if (st->display < 10 && st->curr_node == on) {
        leave(on, st);
        st->display = st->display + 0.1;
        enter(on, st);
        assert(st->curr_node == on);
        return *st;
    }
    if (st->display == 10 && st->curr_node == on) {
        leave(on, st);
        st->display = 10.0;
        enter(on, st);
        assert(st->curr_node == on);
        return *st;
    }
    return *st;
}
