const input = document.getElementById("input");
const addBtn = document.getElementById("addBtn");
const todoList = document.getElementById("todoList");

addBtn.addEventListener("click", function () {
  const item = document.createElement("div");
  item.className = "todoItem";

  const content = document.createElement("span");
  content.className = "itemContent";
  content.textContent = input.value;

  const deleteBtn = document.createElement("button");
  deleteBtn.className = "deleteBtn";
  deleteBtn.textContent = "Delete";
  deleteBtn.addEventListener("click", function () {
    item.remove();
  });

  item.appendChild(content);
  item.appendChild(deleteBtn);
  todoList.appendChild(item);
  input.value = "";
});
