#include "minimed.h"

void enter(node_label n, state* st) {
    st->curr_node = n;
}

void leave(node_label n, state* st) {
    st->prev_node = n;
}

void init(state* st) {
    st->display = 0.0;
    st->curr_node = off;
    st->prev_node = off;
}

UC_8 per_click_UP(const state* st) {
    if (st->curr_node == on) {
        return true;
    }
    return false;
}

UC_8 per_click_DN(const state* st) {
    if (st->curr_node == on) {
        return true;
    }
    return false;
}

UC_8 per_click_on_off(const state* st) {
    if (st->curr_node == off) {
        return true;
    }
    if (st->curr_node == on) {
        return true;
    }
    return false;
}

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

state click_DN(state* st) {
    assert(st->curr_node == on);
    assert(st->display > 0 || st->display == 0);
    if (st->display > 0 && st->curr_node == on) {
        leave(on, st);
        st->display = st->display - 0.1;
        enter(on, st);
        assert(st->curr_node == on);
        return *st;
    }
    if (st->display == 0 && st->curr_node == on) {
        leave(on, st);
        st->display = 0.0;
        enter(on, st);
        assert(st->curr_node == on);
        return *st;
    }
    return *st;
}

state click_on_off(state* st) {
    assert(st->curr_node == off || st->curr_node == on);
    if (true && st->curr_node == off) {
        leave(off, st);
        enter(on, st);
        assert(st->curr_node == on);
        return *st;
    }
    if (true && st->curr_node == on) {
        leave(on, st);
        enter(off, st);
        assert(st->curr_node == off);
        return *st;
    }
    return *st;
}
