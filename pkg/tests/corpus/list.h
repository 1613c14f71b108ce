#ifndef LIST_H
#define LIST_H

// A singly linked list.
struct node {
    int value;
    struct node *next;  /* NULL at the tail */
};

struct node *list_push(struct node *head, int value);
int list_len(const struct node *head);

#endif
